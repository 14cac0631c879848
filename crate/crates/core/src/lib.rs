//! Sequence spaces with exponential weights and the generalized function
//! algebras built from them: ultranorms, moderate and negligible classes,
//! generalized numbers, association relations, function sequences and
//! temperate maps.

pub mod asymptotics;
pub mod corpus;
pub mod demo;
pub mod genfun;
pub mod gennum;
pub mod seqspaces;
pub mod temperate;
pub mod values;
pub mod weights;

pub use asymptotics::{parse, GrowthExpr, SignedExpr};
pub use gennum::{associate, AssocKind, AssocVerdict, GenNumber, NumRep, Space};
pub use seqspaces::{classify, ultranorm, Classification, SeqRep, UltranormValue, Verdict};
pub use values::{ExtReal, Mode, Truth};
pub use weights::{WeightFamily, WeightSeq};
