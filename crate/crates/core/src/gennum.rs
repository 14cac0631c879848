//! Generalized numbers `F/K` over the scalars and the association relations
//! between them.
//!
//! Symbolic representatives are real signed expressions, which are closed
//! under subtraction, so differences `a − b` are computed exactly. Complex
//! phases live only in the sampled tier.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::asymptotics::{
    exp_of_log_expansion, parse_signed, AsymptoticsError, GrowthExpr, SignedExpr,
};
use crate::seqspaces::{
    classify, magnitude_channel, ultranorm, Classification, Exactness, LnEval, SeqError, SeqRep,
    Trend, UltranormValue, Verdict, DEFAULT_M_MAX, SYMBOLIC_SAMPLE_RANGE,
};
use crate::values::{fmt_sig, ExtReal, Mode, Truth};
use crate::weights::{WeightFamily, WeightSeq, WeightsError};

/// Exact ultranorm exponents this close to a threshold count as equal to it.
const THRESHOLD_TOL: f64 = 1e-12;
/// Default number of powers `n^0, …, n^SMAX` probed for the power test set.
pub const DEFAULT_S_MAX: u32 = 32;
/// Sampled null test: a last-window maximum below this is accepted outright.
const NULL_TINY: f64 = 1e-8;
/// Sampled null test: a decreasing tail below this is accepted.
const NULL_SMALL: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("representative {rep} is not moderate in space {space}")]
    NotModerate { rep: String, space: String },
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(String, String),
    #[error("{kind} needs a single-weight space; {space} is a family")]
    NeedsSingleWeight { kind: String, space: String },
    #[error("bad association kind '{0}': {1}")]
    BadKind(String, String),
    #[error("sampled ranges [{0}, {1}] and [{2}, {3}] do not overlap enough")]
    Range(u64, u64, u64, u64),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Expr(#[from] AsymptoticsError),
}

/// A weight family together with the membership mode and quantifier bound.
#[derive(Clone, Debug)]
pub struct Space {
    pub family: WeightFamily,
    pub mode: Mode,
    pub m_max: u32,
}

impl Space {
    pub fn new(family: WeightFamily, mode: Mode) -> Self {
        Space {
            family,
            mode,
            m_max: DEFAULT_M_MAX,
        }
    }

    pub fn colombeau() -> Self {
        Space::new(WeightFamily::colombeau(), Mode::Standard)
    }

    /// Family descriptor as accepted by `WeightFamily::from_descriptor`;
    /// the mode defaults to the family's own.
    pub fn from_descriptor(desc: &str, mode: Option<Mode>) -> Result<Self, GenError> {
        let family = WeightFamily::from_descriptor(desc)?;
        let mode = mode.unwrap_or(family.default_mode);
        Ok(Space::new(family, mode))
    }

    pub fn with_m_max(mut self, m_max: u32) -> Self {
        self.m_max = m_max;
        self
    }

    pub fn id(&self) -> String {
        format!("{} ({})", self.family.name, self.mode)
    }

    pub fn single_weight(&self) -> Option<&WeightSeq> {
        self.family.single_weight()
    }

    pub fn classify(&self, bundle: &[SeqRep]) -> Result<Classification, SeqError> {
        classify(bundle, &self.family, self.mode, self.m_max)
    }

    fn same(&self, other: &Space) -> bool {
        self.family.name == other.family.name
            && self.mode == other.mode
            && self.m_max == other.m_max
    }
}

pub type ComplexEval = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

/// A scalar sequence `n ↦ x_n`.
#[derive(Clone)]
pub enum NumRep {
    Symbolic(SignedExpr),
    Sampled {
        eval: ComplexEval,
        n_min: u64,
        n_max: u64,
        label: String,
    },
}

impl fmt::Debug for NumRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumRep({})", self.label())
    }
}

impl NumRep {
    pub fn parse(text: &str) -> Result<Self, AsymptoticsError> {
        Ok(NumRep::Symbolic(parse_signed(text)?))
    }

    pub fn symbolic(s: SignedExpr) -> Self {
        NumRep::Symbolic(s)
    }

    pub fn growth(g: &GrowthExpr) -> Self {
        NumRep::Symbolic(SignedExpr::from_growth(g))
    }

    pub fn sampled(
        label: impl Into<String>,
        n_min: u64,
        n_max: u64,
        f: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self, SeqError> {
        if n_max < 10_000 || n_min >= n_max {
            return Err(SeqError::Range(n_min, n_max));
        }
        Ok(NumRep::Sampled {
            eval: Arc::new(f),
            n_min,
            n_max,
            label: label.into(),
        })
    }

    pub fn label(&self) -> String {
        match self {
            NumRep::Symbolic(s) => s.to_string(),
            NumRep::Sampled { label, .. } => label.clone(),
        }
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self {
            NumRep::Symbolic(s) => Complex64::new(s.eval(n as f64), 0.0),
            NumRep::Sampled { eval, .. } => eval(n),
        }
    }

    /// `ln |x_n|`, computed without overflow on the symbolic tier.
    pub fn ln_abs(&self, n: u64) -> f64 {
        match self {
            NumRep::Symbolic(s) => s.ln_abs_sign(n as f64).0,
            NumRep::Sampled { eval, .. } => eval(n).norm().ln(),
        }
    }

    fn range(&self) -> (u64, u64) {
        match self {
            NumRep::Symbolic(_) => SYMBOLIC_SAMPLE_RANGE,
            NumRep::Sampled { n_min, n_max, .. } => (*n_min, *n_max),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, NumRep::Symbolic(_))
    }

    /// The seminorm channel `n ↦ |x_n|`.
    pub fn magnitude(&self) -> Result<SeqRep, SeqError> {
        match self {
            NumRep::Symbolic(s) => Ok(magnitude_channel(s)),
            NumRep::Sampled { n_min, n_max, .. } => {
                let me = self.clone();
                SeqRep::sampled_ln(format!("|{}|", self.label()), *n_min, *n_max, move |n| {
                    me.ln_abs(n)
                })
            }
        }
    }

    fn combine(
        &self,
        other: &NumRep,
        op: &str,
        exact: impl Fn(&SignedExpr, &SignedExpr) -> SignedExpr,
        pointwise: impl Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<NumRep, GenError> {
        if let (NumRep::Symbolic(a), NumRep::Symbolic(b)) = (self, other) {
            return Ok(NumRep::Symbolic(exact(a, b)));
        }
        let ((a0, a1), (b0, b1)) = (self.range(), other.range());
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        if hi < 10_000 || lo >= hi {
            return Err(GenError::Range(a0, a1, b0, b1));
        }
        let (x, y) = (self.clone(), other.clone());
        let label = format!("({}) {} ({})", self.label(), op, other.label());
        Ok(NumRep::sampled(label, lo, hi, move |n| {
            pointwise(x.value(n), y.value(n))
        })?)
    }

    pub fn add(&self, o: &NumRep) -> Result<NumRep, GenError> {
        self.combine(o, "+", |a, b| a.add(b), |x, y| x + y)
    }

    pub fn sub(&self, o: &NumRep) -> Result<NumRep, GenError> {
        self.combine(o, "-", |a, b| a.sub(b), |x, y| x - y)
    }

    pub fn mul(&self, o: &NumRep) -> Result<NumRep, GenError> {
        self.combine(o, "*", |a, b| a.mul(b), |x, y| x * y)
    }

    pub fn neg(&self) -> NumRep {
        match self {
            NumRep::Symbolic(s) => NumRep::Symbolic(s.neg()),
            NumRep::Sampled {
                eval,
                n_min,
                n_max,
                label,
            } => {
                let e = eval.clone();
                NumRep::Sampled {
                    eval: Arc::new(move |n| -e(n)),
                    n_min: *n_min,
                    n_max: *n_max,
                    label: format!("-({})", label),
                }
            }
        }
    }
}

/// An element of the quotient ring: a moderate representative in a space.
#[derive(Clone, Debug)]
pub struct GenNumber {
    rep: NumRep,
    space: Arc<Space>,
}

impl fmt::Display for GenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {}", self.rep.label(), self.space.id())
    }
}

impl GenNumber {
    /// Wraps a representative, rejecting it when its magnitude is shown not
    /// to be moderate. Inconclusive evidence is accepted.
    pub fn make(rep: NumRep, space: &Arc<Space>) -> Result<Self, GenError> {
        let c = space.classify(&[rep.magnitude()?])?;
        if c.verdict == Verdict::Divergent {
            return Err(GenError::NotModerate {
                rep: rep.label(),
                space: space.id(),
            });
        }
        Ok(GenNumber {
            rep,
            space: space.clone(),
        })
    }

    pub fn parse(text: &str, space: &Arc<Space>) -> Result<Self, GenError> {
        Self::make(NumRep::parse(text)?, space)
    }

    pub fn rep(&self) -> &NumRep {
        &self.rep
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    fn check_space(&self, o: &GenNumber) -> Result<(), GenError> {
        if Arc::ptr_eq(&self.space, &o.space) || self.space.same(&o.space) {
            Ok(())
        } else {
            Err(GenError::SpaceMismatch(self.space.id(), o.space.id()))
        }
    }

    pub fn add(&self, o: &GenNumber) -> Result<GenNumber, GenError> {
        self.check_space(o)?;
        Self::make(self.rep.add(&o.rep)?, &self.space)
    }

    pub fn sub(&self, o: &GenNumber) -> Result<GenNumber, GenError> {
        self.check_space(o)?;
        Self::make(self.rep.sub(&o.rep)?, &self.space)
    }

    pub fn mul(&self, o: &GenNumber) -> Result<GenNumber, GenError> {
        self.check_space(o)?;
        Self::make(self.rep.mul(&o.rep)?, &self.space)
    }

    pub fn neg(&self) -> GenNumber {
        GenNumber {
            rep: self.rep.neg(),
            space: self.space.clone(),
        }
    }

    /// Classification of the magnitude channel.
    pub fn zero_report(&self) -> Result<Classification, GenError> {
        Ok(self.space.classify(&[self.rep.magnitude()?])?)
    }

    /// Whether the representative lies in the ideal.
    pub fn is_zero(&self) -> Result<Truth, GenError> {
        Ok(self.zero_report()?.in_k)
    }

    /// `self = o` in the quotient.
    pub fn equals(&self, o: &GenNumber) -> Result<Truth, GenError> {
        self.check_space(o)?;
        let d = GenNumber {
            rep: self.rep.sub(&o.rep)?,
            space: self.space.clone(),
        };
        d.is_zero()
    }

    /// `⟦self⟧` under a single-weight space.
    pub fn ultranorm(&self) -> Result<UltranormValue, GenError> {
        let r = self
            .space
            .single_weight()
            .ok_or_else(|| GenError::NeedsSingleWeight {
                kind: "ultranorm".into(),
                space: self.space.id(),
            })?;
        Ok(ultranorm(&self.rep.magnitude()?, r)?)
    }
}

/// The additive subgroup `J` of a `J,X` association.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JSet {
    /// Null sequences.
    Null,
    /// Bounded sequences.
    Bounded,
    /// The ideal itself.
    Negligible,
    /// `{ c : ⟦c⟧ < e^{-s} }`.
    Ball(f64),
}

/// The multiplier set `X` of a `J,X` association.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XSet {
    One,
    /// `{ n^k : 0 ≤ k ≤ s_max }`.
    Powers(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AssocKind {
    Strong(f64),
    Weak,
    SDual(f64),
    WeakS(f64),
    Jx(JSet, XSet),
}

fn num(x: f64) -> String {
    crate::asymptotics::format::num(x)
}

impl fmt::Display for JSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JSet::Null => write!(f, "null"),
            JSet::Bounded => write!(f, "bounded"),
            JSet::Negligible => write!(f, "negligible"),
            JSet::Ball(s) => write!(f, "ball:{}", num(*s)),
        }
    }
}

impl fmt::Display for XSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XSet::One => write!(f, "one"),
            XSet::Powers(m) => write!(f, "powers:{}", m),
        }
    }
}

impl fmt::Display for AssocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssocKind::Strong(s) => write!(f, "strong:{}", num(*s)),
            AssocKind::Weak => write!(f, "weak"),
            AssocKind::SDual(s) => write!(f, "s-dual:{}", num(*s)),
            AssocKind::WeakS(s) => write!(f, "weak-s:{}", num(*s)),
            AssocKind::Jx(j, x) => write!(f, "jx:{}:{}", j, x),
        }
    }
}

fn parse_real(src: &str, what: &str, full: &str) -> Result<f64, GenError> {
    let v: f64 = what
        .trim()
        .parse()
        .map_err(|_| GenError::BadKind(full.into(), format!("'{}' is not a number", what)))?;
    if !v.is_finite() {
        return Err(GenError::BadKind(
            full.into(),
            format!("{} must be finite", src),
        ));
    }
    Ok(v)
}

impl FromStr for AssocKind {
    type Err = GenError;

    /// `weak`, `strong:S`, `s-dual:S`, `weak-s:S`, or `jx:J:X` with
    /// `J ∈ {null, bounded, negligible, ball:S}` and `X ∈ {one, powers[:SMAX]}`.
    fn from_str(s: &str) -> Result<Self, GenError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = |msg: &str| GenError::BadKind(s.into(), msg.into());
        match parts.as_slice() {
            ["weak"] => Ok(AssocKind::Weak),
            ["strong"] => Ok(AssocKind::Strong(0.0)),
            ["strong", v] => Ok(AssocKind::Strong(parse_real("s", v, s)?)),
            ["s-dual", v] => Ok(AssocKind::SDual(parse_real("s", v, s)?)),
            ["weak-s", v] => Ok(AssocKind::WeakS(parse_real("s", v, s)?)),
            ["jx", rest @ ..] => {
                let (j, rest) = match rest {
                    ["null", r @ ..] => (JSet::Null, r),
                    ["bounded", r @ ..] => (JSet::Bounded, r),
                    ["negligible", r @ ..] => (JSet::Negligible, r),
                    ["ball", v, r @ ..] => {
                        (JSet::Ball(parse_real("ball radius exponent", v, s)?), r)
                    }
                    _ => return Err(bad("J must be null, bounded, negligible or ball:S")),
                };
                let x = match rest {
                    [] | ["one"] => XSet::One,
                    ["powers"] => XSet::Powers(DEFAULT_S_MAX),
                    ["powers", m] => XSet::Powers(
                        m.trim()
                            .parse()
                            .map_err(|_| bad("SMAX must be a natural number"))?,
                    ),
                    _ => return Err(bad("X must be one or powers[:SMAX]")),
                };
                Ok(AssocKind::Jx(j, x))
            }
            _ => Err(bad("expected weak, strong:S, s-dual:S, weak-s:S or jx:J:X")),
        }
    }
}

/// Outcome of an association query.
#[derive(Clone, Debug)]
pub struct AssocVerdict {
    pub kind: AssocKind,
    pub holds: Truth,
    /// Set when a strict threshold was met with equality.
    pub boundary: bool,
    pub witness: Vec<String>,
}

impl fmt::Display for AssocVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self.holds {
            Truth::Yes => "holds",
            Truth::No => "fails",
            Truth::Inconclusive => "inconclusive",
        };
        write!(f, "{}: {}", self.kind, word)?;
        if self.boundary {
            write!(f, " [boundary: value equals the strict threshold]")?;
        }
        write!(f, " | witness: {}", self.witness.join("; "))
    }
}

/// A scalar sequence under test, possibly reweighted.
#[derive(Clone)]
enum Probe {
    Exact(SignedExpr),
    Ln {
        ln_abs: LnEval,
        n_min: u64,
        n_max: u64,
        label: String,
    },
}

impl Probe {
    fn of(d: &NumRep) -> Probe {
        match d {
            NumRep::Symbolic(s) => Probe::Exact(s.clone()),
            NumRep::Sampled {
                n_min,
                n_max,
                label,
                ..
            } => {
                let me = d.clone();
                Probe::Ln {
                    ln_abs: Arc::new(move |n| me.ln_abs(n)),
                    n_min: *n_min,
                    n_max: *n_max,
                    label: label.clone(),
                }
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Probe::Exact(s) => s.to_string(),
            Probe::Ln { label, .. } => label.clone(),
        }
    }

    fn mul_growth(&self, g: &GrowthExpr) -> Probe {
        match self {
            Probe::Exact(s) => Probe::Exact(s.mul_growth(g)),
            Probe::Ln {
                ln_abs,
                n_min,
                n_max,
                label,
            } => {
                let (f, g2) = (ln_abs.clone(), g.clone());
                Probe::Ln {
                    ln_abs: Arc::new(move |n| f(n) + g2.ln_eval(n as f64)),
                    n_min: *n_min,
                    n_max: *n_max,
                    label: format!("({}) * ({})", label, g),
                }
            }
        }
    }

    /// Multiplies by `e^{w(n)}` for a sampled exponent `w`.
    fn mul_exp(&self, label: &str, w: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Probe {
        let (f, n_min, n_max, base): (LnEval, u64, u64, String) = match self {
            Probe::Exact(s) => {
                let s2 = s.clone();
                let (lo, hi) = SYMBOLIC_SAMPLE_RANGE;
                (
                    Arc::new(move |n| s2.ln_abs_sign(n as f64).0),
                    lo,
                    hi,
                    s.to_string(),
                )
            }
            Probe::Ln {
                ln_abs,
                n_min,
                n_max,
                label,
            } => (ln_abs.clone(), *n_min, *n_max, label.clone()),
        };
        Probe::Ln {
            ln_abs: Arc::new(move |n| f(n) + w(n)),
            n_min,
            n_max,
            label: format!("({}) * {}", base, label),
        }
    }

    fn magnitude(&self) -> Result<SeqRep, SeqError> {
        match self {
            Probe::Exact(s) => Ok(magnitude_channel(s)),
            Probe::Ln {
                ln_abs,
                n_min,
                n_max,
                label,
            } => {
                let f = ln_abs.clone();
                SeqRep::sampled_ln(format!("|{}|", label), *n_min, *n_max, move |n| f(n))
            }
        }
    }

    /// Maxima of `ln |c_n|` over the last two dyadic windows.
    fn tail_maxima(ln_abs: &LnEval, n_min: u64, n_max: u64) -> Option<(f64, f64)> {
        let mut hi_start = 1u64 << (63 - n_max.leading_zeros());
        if hi_start.saturating_mul(2) - 1 > n_max {
            hi_start /= 2;
        }
        let prev_start = hi_start / 2;
        if prev_start < n_min.max(2) {
            return None;
        }
        let window = |lo: u64| {
            let hi = 2 * lo - 1;
            let step = ((hi - lo) / 64).max(1);
            (lo..=hi)
                .step_by(step as usize)
                .flat_map(|n| [n, (n + 1).min(hi)])
                .map(|n| ln_abs(n))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        Some((window(prev_start), window(hi_start)))
    }

    /// `lim c_n = 0`.
    fn null_test(&self) -> (Truth, String) {
        match self {
            Probe::Exact(s) => {
                if s.is_identically_zero() {
                    return (Truth::Yes, format!("{} is identically zero", self.label()));
                }
                let (e, o) = s.limits();
                let holds = e == ExtReal::ZERO && o == ExtReal::ZERO;
                let lim = if s.is_modulated() {
                    format!("even n: {}, odd n: {}", e, o)
                } else {
                    format!("{}", e)
                };
                (
                    Truth::from_bool(holds),
                    format!("lim {} = {} (exact)", self.label(), lim),
                )
            }
            Probe::Ln {
                ln_abs,
                n_min,
                n_max,
                ..
            } => match Self::tail_maxima(ln_abs, *n_min, *n_max) {
                None => (
                    Truth::Inconclusive,
                    format!("range [{}, {}] too short for a tail test", n_min, n_max),
                ),
                Some((prev, last)) => {
                    let (p, l) = (prev.exp(), last.exp());
                    let holds = if l <= NULL_TINY || (l <= NULL_SMALL && l < p) {
                        Truth::Yes
                    } else if l > NULL_SMALL && l >= p {
                        Truth::No
                    } else {
                        Truth::Inconclusive
                    };
                    (
                        holds,
                        format!(
                            "sup |{}| over the last two dyadic windows up to n = {}: {} then {} (estimated)",
                            self.label(),
                            n_max,
                            fmt_sig(p, 9),
                            fmt_sig(l, 9)
                        ),
                    )
                }
            },
        }
    }

    /// `sup_n |c_n| < ∞`.
    fn bounded_test(&self) -> (Truth, String) {
        match self {
            Probe::Exact(s) => {
                let (e, o) = s.limits();
                let holds = e.is_finite() && o.is_finite();
                (
                    Truth::from_bool(holds),
                    format!(
                        "lim {} along even/odd n = {}, {} (exact)",
                        self.label(),
                        e,
                        o
                    ),
                )
            }
            Probe::Ln {
                ln_abs,
                n_min,
                n_max,
                ..
            } => match Self::tail_maxima(ln_abs, *n_min, *n_max) {
                None => (
                    Truth::Inconclusive,
                    format!("range [{}, {}] too short for a tail test", n_min, n_max),
                ),
                Some((prev, last)) => {
                    let holds = if last <= prev + 2f64.ln().min(0.1) && last.is_finite() {
                        Truth::Yes
                    } else if last > prev + 1.0 {
                        Truth::No
                    } else {
                        Truth::Inconclusive
                    };
                    (
                        holds,
                        format!(
                            "tail sup |{}| = {} then {} (estimated)",
                            self.label(),
                            fmt_sig(prev.exp(), 9),
                            fmt_sig(last.exp(), 9)
                        ),
                    )
                }
            },
        }
    }

    /// `⟦c⟧_r < e^{-s}` with strict-threshold boundary detection.
    fn ball_test(&self, s: f64, r: &WeightSeq) -> Result<(Truth, bool, String), GenError> {
        let v = ultranorm(&self.magnitude()?, r)?;
        let thr = (-s).exp();
        let mut boundary = false;
        let holds = match &v.exactness {
            Exactness::Exact => match v.log_value {
                ExtReal::Finite(g) if (g + s).abs() <= THRESHOLD_TOL => {
                    boundary = true;
                    Truth::No
                }
                lv => Truth::from_bool(lv < ExtReal::Finite(-s)),
            },
            Exactness::Estimated { lo, hi, trend } => match trend {
                Trend::ToZero => Truth::Yes,
                Trend::ToInfinity => Truth::No,
                Trend::Finite if *hi < thr => Truth::Yes,
                Trend::Finite if *lo >= thr => Truth::No,
                Trend::Finite => Truth::Inconclusive,
            },
        };
        Ok((
            holds,
            boundary,
            format!(
                "ultranorm of |{}| = {} vs threshold e^-{} = {}",
                self.label(),
                v,
                num(s),
                fmt_sig(thr, 9)
            ),
        ))
    }
}

fn need_single<'a>(space: &'a Space, kind: &AssocKind) -> Result<&'a WeightSeq, GenError> {
    space
        .single_weight()
        .ok_or_else(|| GenError::NeedsSingleWeight {
            kind: kind.to_string(),
            space: space.id(),
        })
}

/// Reweights by the dual weight `e^{s/r_n}`: exactly when `1/r` is a single
/// atom of the fragment, otherwise by sampling.
fn dual_weighted(p: &Probe, r: &WeightSeq, s: f64) -> Result<Probe, GenError> {
    if s == 0.0 {
        return Ok(p.clone());
    }
    if let Some(inv) = r.inverse_expansion() {
        if let Ok(g) = exp_of_log_expansion(&inv.scale(s)) {
            return Ok(p.mul_growth(&g));
        }
    }
    let r2 = r.clone();
    Ok(p.mul_exp(&format!("e^({}/r_n)", num(s)), move |n| s / r2.eval(n)))
}

fn j_member(
    c: &Probe,
    j: JSet,
    space: &Space,
    kind: &AssocKind,
) -> Result<(Truth, bool, String), GenError> {
    Ok(match j {
        JSet::Null => {
            let (t, w) = c.null_test();
            (t, false, w)
        }
        JSet::Bounded => {
            let (t, w) = c.bounded_test();
            (t, false, w)
        }
        JSet::Negligible => {
            let cl = space.classify(&[c.magnitude()?])?;
            (
                cl.in_k,
                false,
                format!("|{}| classifies {}", c.label(), cl.verdict),
            )
        }
        JSet::Ball(s) => c.ball_test(s, need_single(space, kind)?)?,
    })
}

/// Decides `a ≈ b` for the given kind on the difference of representatives.
pub fn associate(a: &GenNumber, b: &GenNumber, kind: &AssocKind) -> Result<AssocVerdict, GenError> {
    a.check_space(b)?;
    let d = Probe::of(&a.rep.sub(&b.rep)?);
    associate_difference(&d, &a.space, kind)
}

/// Association of a scalar sequence to zero; `d` is the difference of two
/// representatives.
pub fn associate_rep(
    d: &NumRep,
    space: &Space,
    kind: &AssocKind,
) -> Result<AssocVerdict, GenError> {
    associate_difference(&Probe::of(d), space, kind)
}

fn associate_difference(
    d: &Probe,
    space: &Space,
    kind: &AssocKind,
) -> Result<AssocVerdict, GenError> {
    let verdict = |holds, boundary, witness: Vec<String>| AssocVerdict {
        kind: *kind,
        holds,
        boundary,
        witness,
    };
    match *kind {
        AssocKind::Weak => {
            let (t, w) = d.null_test();
            Ok(verdict(t, false, vec![w]))
        }
        AssocKind::Strong(s) | AssocKind::WeakS(s) => {
            let (t, bd, w) = d.ball_test(s, need_single(space, kind)?)?;
            Ok(verdict(t, bd, vec![w]))
        }
        AssocKind::SDual(s) => {
            let r = need_single(space, kind)?;
            let (t, w) = dual_weighted(d, r, s)?.null_test();
            Ok(verdict(t, false, vec![w]))
        }
        AssocKind::Jx(j, x) => {
            let multipliers: Vec<f64> = match x {
                XSet::One => vec![0.0],
                XSet::Powers(m) => (0..=m).map(f64::from).collect(),
            };
            let mut holds = Truth::Yes;
            let mut boundary = false;
            let mut witness = Vec::new();
            for k in multipliers {
                let c = if k == 0.0 {
                    d.clone()
                } else {
                    d.mul_growth(&GrowthExpr::n_pow(1.0, k))
                };
                let (t, bd, w) = j_member(&c, j, space, kind)?;
                holds = holds.and(t);
                boundary |= bd;
                witness.push(format!("x = n^{}: {}", num(k), w));
                if t == Truth::No {
                    break;
                }
            }
            Ok(verdict(holds, boundary, witness))
        }
    }
}

/// Outcome of the well-definedness check of a `J,X` association.
#[derive(Clone, Debug)]
pub struct JxReport {
    pub passed: bool,
    pub ideal_checked: usize,
    pub pairs_checked: usize,
    pub skipped: usize,
    pub counterexample: Option<String>,
}

impl fmt::Display for JxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ideal elements and {} pairs checked, {} inconclusive skipped",
            if self.passed { "pass" } else { "fail" },
            self.ideal_checked,
            self.pairs_checked,
            self.skipped
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "; counterexample: {}", c)?;
        }
        Ok(())
    }
}

/// Checks on a corpus that `J` contains every negligible member and is
/// closed under `+` and `−` on members it contains.
pub fn jx_well_defined(j: JSet, space: &Space, corpus: &[NumRep]) -> Result<JxReport, GenError> {
    let kind = AssocKind::Jx(j, XSet::One);
    let mut report = JxReport {
        passed: true,
        ideal_checked: 0,
        pairs_checked: 0,
        skipped: 0,
        counterexample: None,
    };
    let mut inside = Vec::new();
    for c in corpus {
        let p = Probe::of(c);
        let (t, _, w) = j_member(&p, j, space, &kind)?;
        let negligible = space.classify(&[p.magnitude()?])?.in_k;
        if negligible == Truth::Yes {
            report.ideal_checked += 1;
            if t == Truth::No {
                report.passed = false;
                report.counterexample =
                    Some(format!("ideal element {} is outside J: {}", c.label(), w));
                return Ok(report);
            }
        }
        match t {
            Truth::Yes => inside.push(c.clone()),
            Truth::Inconclusive => report.skipped += 1,
            Truth::No => {}
        }
    }
    for (i, u) in inside.iter().enumerate() {
        for v in inside.iter().skip(i) {
            for (w, op) in [(u.add(v)?, "+"), (u.sub(v)?, "-")] {
                let (t, _, why) = j_member(&Probe::of(&w), j, space, &kind)?;
                report.pairs_checked += 1;
                match t {
                    Truth::No => {
                        report.passed = false;
                        report.counterexample = Some(format!(
                            "({}) {} ({}) leaves J: {}",
                            u.label(),
                            op,
                            v.label(),
                            why
                        ));
                        return Ok(report);
                    }
                    Truth::Inconclusive => report.skipped += 1,
                    Truth::Yes => {}
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col() -> Arc<Space> {
        Arc::new(Space::colombeau())
    }

    fn g(s: &str) -> GenNumber {
        GenNumber::parse(s, &col()).unwrap()
    }

    #[test]
    fn ring_operations() {
        let sp = col();
        let a = GenNumber::parse("n", &sp).unwrap();
        let b = GenNumber::parse("-n", &sp).unwrap();
        assert_eq!(a.add(&b).unwrap().is_zero().unwrap(), Truth::Yes);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.ultranorm().unwrap().log_value, ExtReal::Finite(2.0));
        let p = g("n^1.5").mul(&g("n^-4")).unwrap();
        assert_eq!(p.ultranorm().unwrap().log_value, ExtReal::Finite(-2.5));
        assert!(matches!(
            GenNumber::parse("exp(n)", &sp),
            Err(GenError::NotModerate { .. })
        ));
    }

    #[test]
    fn zero_tests() {
        assert_eq!(g("exp(-log(n)^2)").is_zero().unwrap(), Truth::Yes);
        assert_eq!(g("n^-1000").is_zero().unwrap(), Truth::No);
        assert_eq!(g("0").is_zero().unwrap(), Truth::Yes);
        assert_eq!(
            g("n + 1").equals(&g("n + 1 + exp(-n)")).unwrap(),
            Truth::Yes
        );
    }

    #[test]
    fn kinds_round_trip() {
        for s in [
            "weak",
            "strong:0.5",
            "s-dual:2",
            "weak-s:-1",
            "jx:null:one",
            "jx:ball:0.5:powers:8",
            "jx:negligible:powers:32",
        ] {
            let k: AssocKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!(
            "jx:bounded:powers".parse::<AssocKind>().unwrap(),
            AssocKind::Jx(JSet::Bounded, XSet::Powers(32))
        );
        assert!("strong:x".parse::<AssocKind>().is_err());
        assert!("jx:odd:one".parse::<AssocKind>().is_err());
    }

    #[test]
    fn weak_versus_strong_on_the_unit_sphere() {
        let (a, z) = (g("1/log(n)"), g("0"));
        assert_eq!(
            associate(&a, &z, &AssocKind::Weak).unwrap().holds,
            Truth::Yes
        );
        let v = associate(&a, &z, &AssocKind::Strong(0.0)).unwrap();
        assert_eq!(v.holds, Truth::No);
        assert!(v.boundary);
    }

    #[test]
    fn dual_without_weak_s() {
        // e^{-s/r_n} = n^{-s} for r = 1/log n
        let s = 1.5;
        let z = g("0");
        let a = g("n^-1.5 / log(n)");
        assert_eq!(
            associate(&a, &z, &AssocKind::SDual(s)).unwrap().holds,
            Truth::Yes
        );
        let w = associate(&a, &z, &AssocKind::WeakS(s)).unwrap();
        assert_eq!(w.holds, Truth::No);
        assert!(w.boundary);
        let b = g("n^-2.5");
        assert_eq!(
            associate(&b, &z, &AssocKind::SDual(s)).unwrap().holds,
            Truth::Yes
        );
        assert_eq!(
            associate(&b, &z, &AssocKind::WeakS(s)).unwrap().holds,
            Truth::Yes
        );
    }

    #[test]
    fn dual_weight_under_other_scales() {
        let sp =
            Arc::new(Space::from_descriptor("infra-exponential", Some(Mode::Standard)).unwrap());
        let a = GenNumber::parse("exp(-2*n) * n", &sp).unwrap();
        let z = GenNumber::parse("0", &sp).unwrap();
        assert_eq!(
            associate(&a, &z, &AssocKind::SDual(1.0)).unwrap().holds,
            Truth::Yes
        );
        assert_eq!(
            associate(&a, &z, &AssocKind::SDual(2.0)).unwrap().holds,
            Truth::No
        );
    }

    #[test]
    fn jx_powers_is_equality() {
        let z = g("0");
        let k = AssocKind::Jx(JSet::Null, XSet::Powers(32));
        assert_eq!(
            associate(&g("exp(-log(n)^2)"), &z, &k).unwrap().holds,
            Truth::Yes
        );
        assert_eq!(associate(&g("n^-20"), &z, &k).unwrap().holds, Truth::No);
        // beyond the probed powers the test cannot see the difference
        assert_eq!(associate(&g("n^-40"), &z, &k).unwrap().holds, Truth::Yes);
    }

    #[test]
    fn sampled_weak_association() {
        let sp = col();
        let a = GenNumber::make(
            NumRep::sampled("e^{in}/n", 16, 1 << 20, |n| {
                Complex64::from_polar(1.0 / n as f64, n as f64)
            })
            .unwrap(),
            &sp,
        )
        .unwrap();
        let z = g("0");
        let v = associate(&a, &z, &AssocKind::Weak).unwrap();
        assert_eq!(v.holds, Truth::Yes, "{}", v);
        let b = GenNumber::make(
            NumRep::sampled("e^{in}", 16, 1 << 20, |n| {
                Complex64::from_polar(1.0, n as f64)
            })
            .unwrap(),
            &sp,
        )
        .unwrap();
        assert_eq!(
            associate(&b, &z, &AssocKind::Weak).unwrap().holds,
            Truth::No
        );
    }

    #[test]
    fn subgroups_contain_the_ideal() {
        let sp = Space::colombeau();
        let corpus: Vec<NumRep> = [
            "exp(-log(n)^2)",
            "exp(-n)",
            "n^-2",
            "1/log(n)",
            "-exp(-n^0.5)",
            "3",
            "0",
        ]
        .iter()
        .map(|s| NumRep::parse(s).unwrap())
        .collect();
        for j in [
            JSet::Null,
            JSet::Bounded,
            JSet::Negligible,
            JSet::Ball(0.0),
            JSet::Ball(2.0),
        ] {
            let r = jx_well_defined(j, &sp, &corpus).unwrap();
            assert!(r.passed, "{}: {}", j, r);
            assert!(r.ideal_checked >= 3);
        }
    }
}
