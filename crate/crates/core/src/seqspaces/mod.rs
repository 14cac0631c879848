//! Ultranorms `⟦f⟧_{p,r} = limsup p(f_n)^{r_n}`, the induced pseudometric and
//! membership in the moderate set `F` and the negligible set `K`.

mod classify;
pub mod estimate;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::asymptotics::{GrowthExpr, SignedExpr};
use crate::values::{fmt_sig, ExtReal};
use crate::weights::{WeightKind, WeightSeq};

pub use crate::values::Mode;
pub use classify::{
    classify, ideal_check, ChannelValue, Classification, IdealCheck, Verdict, DEFAULT_M_MAX,
};
pub use estimate::Trend;

/// Index range used when a symbolic sequence meets a sampled weight.
pub const SYMBOLIC_SAMPLE_RANGE: (u64, u64) = (32, 1_000_000);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeqError {
    #[error("sampled estimate did not stabilize: {0}")]
    Unstable(String),
    #[error("empty bundle: at least one seminorm channel is required")]
    EmptyBundle,
    #[error("symbolic inputs differ and no difference sequence was supplied")]
    MissingDifference,
    #[error("inconsistent bundles: {0}")]
    Inconsistent(String),
    #[error("sampled range [{0}, {1}] is too short; n_max must be at least 10^4")]
    Range(u64, u64),
}

/// `n ↦ ln f_n` for a nonnegative sequence (`-inf` where `f_n = 0`).
pub type LnEval = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Tier {
    Symbolic(GrowthExpr),
    /// Finitely many values followed by zeros.
    EventuallyZero(Vec<f64>),
    Sampled {
        ln_eval: LnEval,
        n_min: u64,
        n_max: u64,
    },
}

/// One seminorm channel `n ↦ p(f_n)`.
#[derive(Clone)]
pub struct SeqRep {
    pub tier: Tier,
    pub label: String,
}

impl fmt::Debug for SeqRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeqRep({})", self.label)
    }
}

impl SeqRep {
    pub fn symbolic(e: GrowthExpr) -> Self {
        SeqRep {
            label: e.to_string(),
            tier: Tier::Symbolic(e),
        }
    }

    pub fn parse(text: &str) -> Result<Self, crate::asymptotics::AsymptoticsError> {
        Ok(Self::symbolic(text.parse()?))
    }

    pub fn eventually_zero(prefix: Vec<f64>) -> Self {
        SeqRep {
            label: format!("stationary null ({} leading values)", prefix.len()),
            tier: Tier::EventuallyZero(prefix),
        }
    }

    /// A sampled channel from `n ↦ ln f_n`.
    pub fn sampled_ln(
        label: impl Into<String>,
        n_min: u64,
        n_max: u64,
        ln_eval: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, SeqError> {
        if n_max < 10_000 || n_min >= n_max {
            return Err(SeqError::Range(n_min, n_max));
        }
        Ok(SeqRep {
            label: label.into(),
            tier: Tier::Sampled {
                ln_eval: Arc::new(ln_eval),
                n_min,
                n_max,
            },
        })
    }

    /// A sampled channel from values `n ↦ f_n` (absolute values are taken).
    pub fn sampled(
        label: impl Into<String>,
        n_min: u64,
        n_max: u64,
        f: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, SeqError> {
        Self::sampled_ln(label, n_min, n_max, move |n| f(n).abs().ln())
    }

    pub fn expr(&self) -> Option<&GrowthExpr> {
        match &self.tier {
            Tier::Symbolic(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.tier, Tier::Sampled { .. })
    }

    pub fn ln_eval(&self, n: u64) -> f64 {
        match &self.tier {
            Tier::Symbolic(e) => e.ln_eval(n as f64),
            Tier::EventuallyZero(p) => p
                .get(n as usize)
                .map_or(f64::NEG_INFINITY, |v| v.abs().ln()),
            Tier::Sampled { ln_eval, .. } => ln_eval(n),
        }
    }

    fn range(&self) -> (u64, u64) {
        match &self.tier {
            Tier::Sampled { n_min, n_max, .. } => (*n_min, *n_max),
            _ => SYMBOLIC_SAMPLE_RANGE,
        }
    }

    /// True iff `f_n ≠ 0` for infinitely many `n`, decided exactly.
    fn nonzero_infinitely_often(&self) -> Option<bool> {
        match &self.tier {
            Tier::Symbolic(e) => {
                let (a, b) = e.branches();
                Some(!(a.is_zero() && b.is_zero()))
            }
            Tier::EventuallyZero(_) => Some(false),
            Tier::Sampled { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Exactness {
    Exact,
    Estimated { lo: f64, hi: f64, trend: Trend },
}

/// `⟦f⟧` with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct UltranormValue {
    pub value: f64,
    /// `lim sup r_n ln f_n`, i.e. `ln value`.
    pub log_value: ExtReal,
    pub exactness: Exactness,
    pub witness: String,
}

impl UltranormValue {
    fn exact(log_value: ExtReal, witness: String) -> Self {
        UltranormValue {
            value: log_value.exp(),
            log_value,
            exactness: Exactness::Exact,
            witness,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    /// `(lo, hi)` bracket of the value; degenerate for exact values.
    pub fn band(&self) -> (f64, f64) {
        match self.exactness {
            Exactness::Exact => (self.value, self.value),
            Exactness::Estimated { lo, hi, .. } => (lo, hi),
        }
    }

    /// Closed form for exact values (`e^2`, `0`, `inf`).
    pub fn closed_form(&self) -> String {
        match self.log_value {
            ExtReal::NegInf => "0".into(),
            ExtReal::PosInf => "inf".into(),
            ExtReal::Finite(g) if g == 0.0 => "1".into(),
            ExtReal::Finite(g) => format!("e^{}", crate::asymptotics::format::num(g)),
        }
    }
}

impl fmt::Display for UltranormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exactness {
            Exactness::Exact => match self.log_value {
                ExtReal::Finite(g) if g != 0.0 => write!(
                    f,
                    "exact {} ≈ {}",
                    self.closed_form(),
                    fmt_sig(self.value, 9)
                ),
                _ => write!(f, "exact {}", self.closed_form()),
            },
            Exactness::Estimated { lo, hi, trend } => match trend {
                Trend::Finite => write!(
                    f,
                    "estimated {} [{}, {}]",
                    fmt_sig(self.value, 9),
                    fmt_sig(*lo, 9),
                    fmt_sig(*hi, 9)
                ),
                Trend::ToZero => write!(
                    f,
                    "estimated 0 (tail decays faster than every weight power)"
                ),
                Trend::ToInfinity => write!(f, "estimated inf (tail diverges)"),
            },
        }
    }
}

/// Computes `⟦f⟧_r`: exactly when both inputs are symbolic (or trivially
/// decidable), otherwise by the tail estimator.
pub fn ultranorm(f: &SeqRep, r: &WeightSeq) -> Result<UltranormValue, SeqError> {
    if let Tier::EventuallyZero(_) = f.tier {
        return Ok(UltranormValue::exact(
            ExtReal::NegInf,
            "eventually zero sequence".into(),
        ));
    }
    if let Tier::Symbolic(e) = &f.tier {
        if e.is_zero() {
            return Ok(UltranormValue::exact(
                ExtReal::NegInf,
                "zero sequence".into(),
            ));
        }
    }
    if let WeightKind::EgorovStep(m) = r.kind {
        return Ok(egorov_norm(f, m));
    }
    if let (Tier::Symbolic(e), WeightKind::Symbolic(w)) = (&f.tier, &r.kind) {
        return Ok(symbolic_norm(e, w));
    }
    let (n_min, n_max) = f.range();
    let ln_f = |n: u64| f.ln_eval(n);
    let rr = |n: u64| r.eval(n);
    let est = estimate::estimate(&ln_f, &rr, n_min, n_max)?;
    Ok(from_estimate(&est, n_max))
}

fn from_estimate(est: &estimate::Estimate, n_max: u64) -> UltranormValue {
    let log_value = ExtReal::from_f64(est.log_value).unwrap_or(ExtReal::ZERO);
    let witness = format!(
        "tail estimate over {} dyadic windows up to n = {}; last-window sup of r*ln f = {}",
        est.windows,
        n_max,
        fmt_sig(est.last_window, 6)
    );
    UltranormValue {
        value: est.log_value.exp(),
        log_value,
        exactness: Exactness::Estimated {
            lo: est.log_lo.exp(),
            hi: est.log_hi.exp(),
            trend: est.trend,
        },
        witness,
    }
}

fn symbolic_norm(f: &GrowthExpr, r: &GrowthExpr) -> UltranormValue {
    let (even, odd) = f.branches();
    let mut best = ExtReal::NegInf;
    let mut why = Vec::new();
    for (name, b) in [("even", &even), ("odd", &odd)] {
        if b.is_zero() {
            why.push(format!("{} branch is zero", name));
            continue;
        }
        let l = b.log_expr().expect("nonzero unmodulated branch");
        let lim = r.limit_of_product(&l).upper();
        why.push(format!(
            "lim r_n*ln f_n = {} via dominant term {}",
            lim,
            crate::asymptotics::format::term_str(b.dominant_term().unwrap())
        ));
        best = best.max(lim);
        if !f.is_modulated() {
            break;
        }
    }
    UltranormValue::exact(best, why.join("; "))
}

fn egorov_norm(f: &SeqRep, m: u32) -> UltranormValue {
    match f.nonzero_infinitely_often() {
        Some(true) => UltranormValue::exact(
            ExtReal::ZERO,
            format!("f_n != 0 infinitely often and r_n = 0 for n > {}", m),
        ),
        Some(false) => {
            UltranormValue::exact(ExtReal::NegInf, "f is eventually zero; 0^0 = 0".into())
        }
        None => {
            let (lo, hi) = f.range();
            let tail_lo = (hi / 4).max(lo);
            let nonzero = (tail_lo..=hi)
                .step_by(((hi - tail_lo) / 4096).max(1) as usize)
                .any(|n| f.ln_eval(n) > f64::NEG_INFINITY);
            let lv = if nonzero {
                ExtReal::ZERO
            } else {
                ExtReal::NegInf
            };
            UltranormValue {
                value: lv.exp(),
                log_value: lv,
                exactness: Exactness::Estimated {
                    lo: lv.exp(),
                    hi: lv.exp(),
                    trend: if nonzero {
                        Trend::Finite
                    } else {
                        Trend::ToZero
                    },
                },
                witness: format!(
                    "tail [{}, {}] {} a nonzero value",
                    tail_lo,
                    hi,
                    if nonzero { "contains" } else { "has no" }
                ),
            }
        }
    }
}

/// `d_r(f, g) = ⟦f − g⟧_r`. Symbolic inputs need the difference supplied
/// unless they are equal.
pub fn pseudometric(
    f: &SeqRep,
    g: &SeqRep,
    diff: Option<&SeqRep>,
    r: &WeightSeq,
) -> Result<UltranormValue, SeqError> {
    if let Some(d) = diff {
        return ultranorm(d, r);
    }
    if let (Some(a), Some(b)) = (f.expr(), g.expr()) {
        if a == b {
            return Ok(UltranormValue::exact(
                ExtReal::NegInf,
                "identical representatives".into(),
            ));
        }
        return Err(SeqError::MissingDifference);
    }
    if f.is_exact() && g.is_exact() {
        return Err(SeqError::MissingDifference);
    }
    let (lo_f, hi_f) = f.range();
    let (lo_g, hi_g) = g.range();
    let (f2, g2) = (f.clone(), g.clone());
    let d = SeqRep::sampled_ln(
        format!("|{} - {}|", f.label, g.label),
        lo_f.max(lo_g),
        hi_f.min(hi_g),
        move |n| ln_abs_diff(f2.ln_eval(n), g2.ln_eval(n)),
    )?;
    ultranorm(&d, r)
}

/// `ln |e^a − e^b|` without forming the exponentials.
pub fn ln_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(-(hi - lo)).exp_m1()).ln()
}

/// `|a|` of a signed expression as a channel; non-exact magnitudes are
/// asymptotically equivalent, which leaves every ultranorm unchanged.
pub fn magnitude_channel(s: &SignedExpr) -> SeqRep {
    SeqRep::symbolic(s.abs().0)
}
