//! Exact calculus on asymptotic growth expressions.
//!
//! The universe is sums of terms `c · n^a · (log n)^b · (loglog n)^c · exp(Σ c_i n^{d_i} (log n)^{e_i})`
//! with optional parity modulation. Every term is `exp` of a finite
//! combination of log-scale atoms, so dominance and the limits
//! `lim r_n · log f(n)` reduce to reading the leading atom of a
//! [`LogExpansion`].

mod expr;
pub(crate) mod format;
mod logexp;
mod parse;
mod signed;
mod term;

use thiserror::Error;

pub use expr::{atom_expr, exp_of_log_expansion, GrowthExpr, ProductLimit};
pub use logexp::{Dominance, LogAtom, LogExpansion};
pub use parse::{parse, parse_signed};
pub use signed::SignedExpr;
pub use term::{ExpAtom, GrowthTerm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("semantic error at column {pos}: {msg}")]
    Semantic { pos: usize, msg: String },
    #[error("logarithm of the zero sequence")]
    LogOfZero,
    #[error("{0} is not defined for parity-modulated expressions")]
    Modulated(&'static str),
    #[error("not representable in the growth fragment: {0}")]
    NotRepresentable(String),
}

impl AsymptoticsError {
    /// Column of a parse error, when there is one.
    pub fn position(&self) -> Option<usize> {
        match self {
            AsymptoticsError::Syntax { pos, .. } | AsymptoticsError::Semantic { pos, .. } => {
                Some(*pos)
            }
            _ => None,
        }
    }
}
