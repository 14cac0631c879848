//! Sequences of smooth functions on the line: seminorms
//! `p_ν(f) = sup_{α ≤ ν, |x| ≤ ν} |f^{(α)}(x)|`, mollifiers, duality pairings
//! and weak association.
//!
//! Derivatives come from analytic jets, not finite differences. Suprema are
//! taken over a lattice, so computed seminorms are lower bounds of the true
//! ones.

pub mod jet;
pub mod library;
mod mollifier;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::gennum::{associate_rep, AssocKind, AssocVerdict, GenError, NumRep, Space};
use crate::seqspaces::{
    ultranorm, Classification, Exactness, SeqError, SeqRep, Trend, UltranormValue,
};
use crate::values::Truth;
use crate::weights::WeightSeq;

pub use jet::Jet;
pub use mollifier::{test_set, Mollifier, TestFunction, MOMENT_TOL};
pub use parse::parse_fun;

/// Derivative order available from corpus functions.
pub const DEFAULT_MAX_ORDER: usize = 16;
/// Index range sampled for function sequences.
pub const FUN_RANGE: (u64, u64) = (16, 16_384);
/// Coarse lattice spacing away from narrow features.
pub const COARSE_SPACING: f64 = 1.0 / 1024.0;
/// Pairing quadrature tolerance, relative to `max(1, |integral|)`.
pub const PAIRING_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenfunError {
    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },
    #[error("not a mollifier: integral is {integral}, expected 1")]
    NotMollifier { integral: f64 },
    #[error("quadrature on [{a}, {b}] did not converge (error estimate {estimate})")]
    Quadrature { a: f64, b: f64, estimate: f64 },
    #[error("probe {probe} has moment class {class}, below the required {needed}")]
    InsufficientMoments {
        probe: String,
        class: u32,
        needed: u32,
    },
    #[error("profile has unbounded support")]
    Unbounded,
    #[error("empty test function set")]
    EmptyTestSet,
    #[error("{0} is decided on seminorms, not on pairings")]
    UnsupportedKind(String),
    #[error("syntax error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// A sequence `(f_n)` of smooth functions with analytic derivatives.
pub trait SmoothSeq: Send + Sync {
    /// Jet of `f_n` at `x` up to `order`.
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet;
    /// Interval outside which `f_n` vanishes; `None` when unbounded.
    fn support(&self, n: u64) -> Option<(f64, f64)>;
    /// Length scale of the finest feature of `f_n`.
    fn feature_width(&self, _n: u64) -> f64 {
        1.0
    }
    /// Region holding the narrow features, refined by lattices and
    /// quadrature.
    fn focus(&self, _n: u64) -> Option<(f64, f64)> {
        None
    }
    /// The two parts of a sum, so pairings can use linearity.
    fn summands(&self) -> Option<(Fun, Fun)> {
        None
    }
    fn max_order(&self) -> usize {
        DEFAULT_MAX_ORDER
    }
    fn label(&self) -> String;
}

pub type Fun = Arc<dyn SmoothSeq>;

/// Lattice spacing `min(2^-10, w/64)` with `w` the feature width of `f_n`.
pub fn lattice_spacing(f: &dyn SmoothSeq, n: u64) -> f64 {
    COARSE_SPACING.min(f.feature_width(n) / 64.0)
}

fn lattice(lo: f64, hi: f64, h: f64, out: &mut Vec<f64>) {
    if hi < lo {
        return;
    }
    let (k0, k1) = ((lo / h).ceil() as i64, (hi / h).floor() as i64);
    out.extend((k0..=k1).map(|k| k as f64 * h));
}

/// Half-width of the domain of `p_ν`. It is floored at 2 so that the low
/// seminorms see more than a point and still grow with `ν`.
pub fn seminorm_radius(nu: usize) -> f64 {
    (nu as f64).max(2.0)
}

/// Lattice segments of `[-R, R] ∩ supp f_n`: the coarse spacing everywhere
/// and the fine one inside the focus region.
fn seminorm_segments(f: &dyn SmoothSeq, n: u64, nu: usize) -> Vec<Vec<f64>> {
    let radius = seminorm_radius(nu);
    let (mut lo, mut hi) = (-radius, radius);
    if let Some((a, b)) = f.support(n) {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    if hi < lo {
        return Vec::new();
    }
    let h = lattice_spacing(f, n);
    let mut coarse = Vec::new();
    match f.focus(n) {
        Some((a, b)) if h < COARSE_SPACING => {
            let mut fine = Vec::new();
            lattice(lo, hi, COARSE_SPACING, &mut coarse);
            lattice(a.max(lo), b.min(hi), h, &mut fine);
            vec![coarse, fine]
        }
        _ => {
            lattice(lo, hi, h, &mut coarse);
            vec![coarse]
        }
    }
}

/// Stride of the first pass over a lattice segment. Features span at least
/// 64 lattice steps, so a stride of 8 still sees each of them 8 times.
const SCAN_STRIDE: usize = 8;

/// Maximum of `at` over a uniform lattice: every `SCAN_STRIDE`-th point
/// first, then the full lattice around each local maximum of that scan.
fn lattice_max(pts: &[f64], at: &(dyn Fn(&f64) -> f64 + Sync)) -> f64 {
    if pts.len() <= 8 * SCAN_STRIDE {
        return pts.iter().map(at).fold(f64::NEG_INFINITY, f64::max);
    }
    let mut idx: Vec<usize> = (0..pts.len()).step_by(SCAN_STRIDE).collect();
    if *idx.last().unwrap() != pts.len() - 1 {
        idx.push(pts.len() - 1);
    }
    let scan: Vec<f64> = idx.par_iter().map(|i| at(&pts[*i])).collect();
    let mut best = scan.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for k in 0..scan.len() {
        let v = scan[k];
        let left = if k > 0 {
            scan[k - 1]
        } else {
            f64::NEG_INFINITY
        };
        let right = if k + 1 < scan.len() {
            scan[k + 1]
        } else {
            f64::NEG_INFINITY
        };
        if v == f64::NEG_INFINITY || v < left || v < right {
            continue;
        }
        let a = if k > 0 { idx[k - 1] } else { 0 };
        let b = if k + 1 < idx.len() {
            idx[k + 1]
        } else {
            pts.len() - 1
        };
        best = pts[a..=b].iter().map(at).fold(best, f64::max);
    }
    best
}

/// `ln p_ν(f_n)` over the lattice; `-inf` when `f_n` vanishes there.
pub fn ln_seminorm(f: &dyn SmoothSeq, n: u64, nu: usize) -> Result<f64, GenfunError> {
    if nu > f.max_order() {
        return Err(GenfunError::OrderTooHigh {
            requested: nu,
            max: f.max_order(),
        });
    }
    let at = |x: &f64| {
        let j = f.jet(n, *x, nu);
        (0..=nu)
            .map(|a| j.ln_abs_derivative(a))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(seminorm_segments(f, n, nu)
        .iter()
        .map(|seg| lattice_max(seg, &at))
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn seminorm(f: &dyn SmoothSeq, n: u64, nu: usize) -> Result<f64, GenfunError> {
    Ok(ln_seminorm(f, n, nu)?.exp())
}

fn quad(f: &(dyn Fn(f64) -> f64 + Sync), a: f64, b: f64) -> Result<f64, GenfunError> {
    if b <= a {
        return Ok(0.0);
    }
    let out = quadrature::integrate(f, a, b, PAIRING_TOL * 1e-3);
    if !out.integral.is_finite() || out.error_estimate > PAIRING_TOL * out.integral.abs().max(1.0) {
        return Err(GenfunError::Quadrature {
            a,
            b,
            estimate: out.error_estimate,
        });
    }
    Ok(out.integral)
}

/// `⟨f_n, ψ⟩ = ∫ f_n ψ` by adaptive quadrature over the support
/// intersection, split at the focus region of `f_n`.
pub fn pairing(f: &dyn SmoothSeq, n: u64, psi: &TestFunction) -> Result<f64, GenfunError> {
    if let Some((a, b)) = f.summands() {
        return Ok(pairing(a.as_ref(), n, psi)? + pairing(b.as_ref(), n, psi)?);
    }
    let (mut lo, mut hi) = psi.support;
    if let Some((a, b)) = f.support(n) {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let mut cuts = vec![lo];
    if let Some((a, b)) = f.focus(n) {
        cuts.extend([a, b].into_iter().filter(|c| *c > lo && *c < hi));
    }
    cuts.push(hi);
    let integrand = |x: f64| f.jet(n, x, 0).value() * psi.value(x);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += quad(&integrand, w[0], w[1])?;
    }
    Ok(total)
}

/// One sampled channel `n ↦ p_ν(f_n)` per `ν ≤ nu_max`.
pub fn seminorm_bundle(f: &Fun, nu_max: usize) -> Result<Vec<SeqRep>, GenfunError> {
    if nu_max > f.max_order() {
        return Err(GenfunError::OrderTooHigh {
            requested: nu_max,
            max: f.max_order(),
        });
    }
    let (lo, hi) = FUN_RANGE;
    (0..=nu_max)
        .map(|nu| {
            let g = f.clone();
            Ok(SeqRep::sampled_ln(
                format!("p_{}({})", nu, f.label()),
                lo,
                hi,
                move |n| ln_seminorm(g.as_ref(), n, nu).unwrap_or(f64::NAN),
            )?)
        })
        .collect()
}

/// Classifies `(f_n)` through its seminorms `p_0, …, p_{nu_max}`.
pub fn classify_fun(f: &Fun, nu_max: usize, space: &Space) -> Result<Classification, GenfunError> {
    Ok(space.classify(&seminorm_bundle(f, nu_max)?)?)
}

/// `⟨f_n − g_n, ψ⟩` as a sampled scalar sequence.
pub fn pairing_sequence(f: &Fun, g: &Fun, psi: &TestFunction) -> Result<NumRep, GenfunError> {
    let (f2, g2, p2) = (f.clone(), g.clone(), psi.clone());
    let (lo, hi) = FUN_RANGE;
    Ok(NumRep::sampled(
        format!("<{} - {}, {}>", f.label(), g.label(), psi.label),
        lo,
        hi,
        move |n| {
            let v =
                pairing(f2.as_ref(), n, &p2).and_then(|a| Ok(a - pairing(g2.as_ref(), n, &p2)?));
            Complex64::new(v.unwrap_or(f64::NAN), 0.0)
        },
    )?)
}

/// Weak association of function sequences through the scalar sequences
/// `⟨f_n − g_n, ψ⟩`, conjoined over the finite test set.
pub fn weak_assoc_fun(
    f: &Fun,
    g: &Fun,
    kind: &AssocKind,
    psis: &[TestFunction],
    space: &Space,
) -> Result<AssocVerdict, GenfunError> {
    if psis.is_empty() {
        return Err(GenfunError::EmptyTestSet);
    }
    if let AssocKind::Strong(_) = kind {
        return Err(GenfunError::UnsupportedKind(kind.to_string()));
    }
    let mut holds = Truth::Yes;
    let mut boundary = false;
    let mut witness = vec![format!(
        "with respect to the given test set of {} functions",
        psis.len()
    )];
    for psi in psis {
        // the pairing is evaluated once more at the top of the range so that a
        // quadrature failure surfaces as an error instead of a NaN sample
        pairing(f.as_ref(), FUN_RANGE.1, psi)?;
        pairing(g.as_ref(), FUN_RANGE.1, psi)?;
        let v = associate_rep(&pairing_sequence(f, g, psi)?, space, kind)?;
        holds = holds.and(v.holds);
        boundary |= v.boundary;
        witness.push(format!(
            "psi = {}: {} ({})",
            psi.label,
            v.holds,
            v.witness.join("; ")
        ));
    }
    Ok(AssocVerdict {
        kind: *kind,
        holds,
        boundary,
        witness,
    })
}

/// Strong `s`-association on seminorms: `⟦f − g⟧_{p_ν} < e^{-s}` for every
/// `ν ≤ nu_max`.
pub fn strong_assoc_fun(
    f: &Fun,
    g: &Fun,
    s: f64,
    nu_max: usize,
    r: &WeightSeq,
) -> Result<AssocVerdict, GenfunError> {
    let d = library::difference(f.clone(), g.clone());
    let thr = (-s).exp();
    let mut holds = Truth::Yes;
    let mut witness = Vec::new();
    for ch in seminorm_bundle(&d, nu_max)? {
        let v = ultranorm(&ch, r)?;
        let t = match v.exactness {
            Exactness::Estimated {
                trend: Trend::ToZero,
                ..
            } => Truth::Yes,
            Exactness::Estimated {
                trend: Trend::ToInfinity,
                ..
            } => Truth::No,
            _ => {
                let (lo, hi) = v.band();
                if hi < thr {
                    Truth::Yes
                } else if lo >= thr {
                    Truth::No
                } else {
                    Truth::Inconclusive
                }
            }
        };
        holds = holds.and(t);
        witness.push(format!("{}: {}", ch.label, v));
    }
    Ok(AssocVerdict {
        kind: AssocKind::Strong(s),
        holds,
        boundary: false,
        witness,
    })
}

/// Membership of one extracted sequence `(f_{φ_n})_n` for one probe `φ`.
#[derive(Clone, Debug)]
pub struct ExtractedRow {
    pub probe: String,
    pub moment_class: u32,
    pub value: UltranormValue,
    pub in_f: Truth,
    pub in_k: Truth,
}

impl fmt::Display for ExtractedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "probe {} (moment class {}): ultranorm {}; in F_(nu,N,phi): {}; in K_(nu,N,phi): {} [probe-scale only]",
            self.probe, self.moment_class, self.value, self.in_f, self.in_k
        )
    }
}

/// For each probe mollifier `φ` with moment class at least `big_n`, decides
/// `⟦(f_{φ_n})_n⟧_{p_ν} < N` and `= 0`. The intersection over every `φ` of
/// the class is out of reach; rows are per probe.
pub fn extracted_membership(
    family: &dyn Fn(&Fun) -> Fun,
    nu: usize,
    big_n: u32,
    probes: &[Mollifier],
    r: &WeightSeq,
) -> Result<Vec<ExtractedRow>, GenfunError> {
    let mut rows = Vec::new();
    for phi in probes {
        let class = phi.moment_class(big_n, 1e-8)?;
        if class < big_n {
            return Err(GenfunError::InsufficientMoments {
                probe: phi.label.clone(),
                class,
                needed: big_n,
            });
        }
        let f = family(&phi.sequence());
        let ch = seminorm_bundle(&f, nu)?.pop().expect("nu channel");
        let value = ultranorm(&ch, r)?;
        let n = f64::from(big_n);
        let (in_f, in_k) = match value.exactness {
            Exactness::Estimated {
                trend: Trend::ToZero,
                ..
            } => (Truth::Yes, Truth::Yes),
            Exactness::Estimated {
                trend: Trend::ToInfinity,
                ..
            } => (Truth::No, Truth::No),
            _ => {
                let (lo, hi) = value.band();
                let in_f = if hi < n {
                    Truth::Yes
                } else if lo >= n {
                    Truth::No
                } else {
                    Truth::Inconclusive
                };
                (in_f, Truth::from_bool(value.value == 0.0))
            }
        };
        rows.push(ExtractedRow {
            probe: phi.label.clone(),
            moment_class: class,
            value,
            in_f,
            in_k,
        });
    }
    Ok(rows)
}
