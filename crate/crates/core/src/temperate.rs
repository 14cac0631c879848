//! Maps that pass to the quotient: moderate and compatible scalar maps,
//! temperate maps on function sequences and their componentwise extension.
//!
//! Scalar maps are evaluated in doubly logarithmic form `u ↦ ln g(e^u)`, so
//! the quantity `(g(x^{1/r^m_n}))^{r^M_n}` is handled as
//! `r^M_n · ln g(e^{ln x / r^m_n})` and never overflows before it matters.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotics::{Dominance, GrowthExpr, LogExpansion};
use crate::genfun::{classify_fun, library as lib, ln_seminorm, seminorm_bundle, Fun, GenfunError};
use crate::gennum::Space;
use crate::seqspaces::{classify, ultranorm, Classification, SeqError, SeqRep, Verdict};
use crate::values::{fmt_sig, Truth};
use crate::weights::{Direction, WeightFamily, WeightKind, WeightSeq};

/// Largest family index tried for `m` and `M`.
pub const SEARCH_BOUND: u32 = 16;
/// `x` runs over `10^{k/2}` for `k` in this range (moderateness); the
/// compatibility grid stops at `x = 1`.
pub const X_HALF_DECADES: (i32, i32) = (-16, 16);
/// Indices probed are `n = 2^j`, `1 ≤ j ≤ N_EXP_MAX`.
pub const N_EXP_MAX: u32 = 20;
/// Level below which a compatibility value counts as small.
pub const COMPAT_EPS: f64 = 9.118_819_655_545_162e-4; // e^{-7}
/// Rise of `ln Q` across the probed indices that counts as growth.
pub const GROWTH_MARGIN: f64 = 1.0;
/// Slack for the seminorm inequalities, in log units.
pub const INEQ_TOL: f64 = 1e-9;

/// Dyadic windows of exponents `j` used for uniformity in `n`.
pub const WINDOWS: [(u32, u32); 4] = [(1, 5), (6, 10), (11, 15), (16, 20)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemperateError {
    #[error("map {0} has no declared seminorm pairing")]
    MissingPairing(String),
    #[error("map {map} carries no certificate of temperateness ({status})")]
    NotCertified { map: String, status: String },
    #[error("input {input} is not moderate ({verdict})")]
    InputNotModerate { input: String, verdict: String },
    #[error("perturbation {input} is not negligible ({verdict})")]
    NotNegligible { input: String, verdict: String },
    #[error("extension of {map} is not moderate on {input} ({verdict}): the certificate does not cover this input")]
    ExtensionNotModerate {
        map: String,
        input: String,
        verdict: String,
    },
    #[error("continuity probe needs a single-weight space")]
    NeedsSingleWeight,
    #[error(transparent)]
    Fun(#[from] GenfunError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Catalog tags; maps with a tag get exact decisions.
#[derive(Clone, Debug, PartialEq)]
pub enum MapTag {
    Power(f64),
    Exp,
    Log1p,
    /// `Σ c_k y^k` with `c_k ≥ 0`; affine maps are the degree-one case.
    Poly(Vec<f64>),
    /// `1/|ln y|`, increasing on `(0, 1)`.
    InvLog,
    /// `outer ∘ inner`.
    Compose(Box<MapTag>, Box<MapTag>),
}

type LnLn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An increasing map `g: ℝ₊ → ℝ₊`.
#[derive(Clone)]
pub struct ScalarMap {
    pub name: String,
    pub tag: Option<MapTag>,
    ln_ln: LnLn,
    /// Interval on which the map is claimed increasing.
    pub domain: (f64, f64),
}

impl fmt::Debug for ScalarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarMap({})", self.name)
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl ScalarMap {
    fn new(
        name: impl Into<String>,
        tag: Option<MapTag>,
        domain: (f64, f64),
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarMap {
            name: name.into(),
            tag,
            ln_ln: Arc::new(f),
            domain,
        }
    }

    /// `x ↦ x^k`, `k > 0`.
    pub fn power(k: f64) -> Self {
        assert!(k > 0.0, "power maps need a positive exponent");
        Self::new(
            format!("x^{}", k),
            Some(MapTag::Power(k)),
            (0.0, f64::INFINITY),
            move |u| k * u,
        )
    }

    pub fn identity() -> Self {
        ScalarMap {
            name: "identity".into(),
            ..Self::power(1.0)
        }
    }

    pub fn exp() -> Self {
        Self::new("exp", Some(MapTag::Exp), (0.0, f64::INFINITY), f64::exp)
    }

    /// `x ↦ ln(1 + x)`.
    pub fn log1p() -> Self {
        Self::new("log1p", Some(MapTag::Log1p), (0.0, f64::INFINITY), |u| {
            if u < -35.0 {
                u
            } else if u > 35.0 {
                (u + (-u).exp()).ln()
            } else {
                u.exp().ln_1p().ln()
            }
        })
    }

    /// `Σ c_k x^k`, coefficients in increasing degree, all nonnegative.
    pub fn poly(coeffs: &[f64]) -> Self {
        assert!(
            coeffs.iter().all(|c| *c >= 0.0),
            "polynomial maps need nonnegative coefficients"
        );
        let c = coeffs.to_vec();
        let name = c
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, v)| match k {
                0 => fmt_sig(*v, 9),
                1 => format!("{}x", fmt_sig(*v, 9)),
                _ => format!("{}x^{}", fmt_sig(*v, 9), k),
            })
            .collect::<Vec<_>>()
            .join(" + ");
        let cc = c.clone();
        Self::new(
            if name.is_empty() { "0".into() } else { name },
            Some(MapTag::Poly(c)),
            (0.0, f64::INFINITY),
            move |u| {
                let parts: Vec<f64> = cc
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v > 0.0)
                    .map(|(k, v)| v.ln() + if k == 0 { 0.0 } else { k as f64 * u })
                    .collect();
                if parts.is_empty() {
                    f64::NEG_INFINITY
                } else {
                    log_sum_exp(&parts)
                }
            },
        )
    }

    /// `x ↦ a x + b`.
    pub fn affine(a: f64, b: f64) -> Self {
        ScalarMap {
            name: format!("{}x + {}", fmt_sig(a, 9), fmt_sig(b, 9)),
            ..Self::poly(&[b, a])
        }
    }

    /// `x ↦ 1/|ln x|`, a compatibility candidate near 0.
    pub fn inv_log() -> Self {
        Self::new("1/|log x|", Some(MapTag::InvLog), (0.0, 0.5), |u| {
            -u.abs().ln()
        })
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &ScalarMap, inner: &ScalarMap) -> Self {
        let (o, i) = (outer.ln_ln.clone(), inner.ln_ln.clone());
        let tag = match (&outer.tag, &inner.tag) {
            (Some(a), Some(b)) => Some(MapTag::Compose(Box::new(a.clone()), Box::new(b.clone()))),
            _ => None,
        };
        let dom = (inner.domain.0, inner.domain.1);
        Self::new(
            format!("({})∘({})", outer.name, inner.name),
            tag,
            dom,
            move |u| o(i(u)),
        )
    }

    /// An untagged map, decided only by numeric search.
    pub fn black_box(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, None, (0.0, f64::INFINITY), move |u| f(u.exp()).ln())
    }

    /// Forgets the catalog tag, forcing numeric decisions.
    pub fn untagged(&self) -> Self {
        ScalarMap {
            tag: None,
            ..self.clone()
        }
    }

    /// `ln g(e^u)`.
    pub fn ln_of_ln(&self, u: f64) -> f64 {
        (self.ln_ln)(u)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.ln_of_ln(x.ln()).exp()
    }

    /// `g(0⁺)`.
    pub fn at_zero(&self) -> f64 {
        self.ln_of_ln(f64::NEG_INFINITY).exp()
    }

    /// Spot check of monotonicity on a logarithmic grid of the domain;
    /// returns the first decreasing pair.
    pub fn monotonicity_violation(&self) -> Option<(f64, f64)> {
        let grid: Vec<f64> = (-32..=32)
            .map(|k| 10f64.powf(k as f64 / 4.0))
            .filter(|x| *x > self.domain.0 && *x < self.domain.1)
            .collect();
        grid.windows(2).find_map(|w| {
            let (a, b) = (self.ln_of_ln(w[0].ln()), self.ln_of_ln(w[1].ln()));
            (b < a - 1e-12 * a.abs().max(1.0)).then_some((w[0], w[1]))
        })
    }
}

/// Which property is being certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Moderate,
    Compatible,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Moderate => "r-moderate",
            Role::Compatible => "r-compatible",
        })
    }
}

/// The outer quantified index of a failed search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixed {
    SmallM(u32),
    BigM(u32),
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixed::SmallM(m) => write!(f, "m={}", m),
            Fixed::BigM(m) => write!(f, "M={}", m),
        }
    }
}

/// One failed `(m, M)` pair: the value `(g(x^{1/r^m_n}))^{r^M_n}` misbehaves
/// at `x` on the exponent window `j ∈ [window.0, window.1]` (`n = 2^j`). For
/// compatibility, `reference` is a window on which the same `x` is below the
/// threshold, which shows the threshold depends on `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairWitness {
    pub m: u32,
    pub big_m: u32,
    pub x: f64,
    pub window: (u32, u32),
    pub reference: Option<(u32, u32)>,
}

/// A replayable refutation.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub fixed: Fixed,
    pub failures: Vec<PairWitness>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertStatus {
    Certified,
    Refuted(Witness),
    Inconclusive(String),
}

impl CertStatus {
    pub fn truth(&self) -> Truth {
        match self {
            CertStatus::Certified => Truth::Yes,
            CertStatus::Refuted(_) => Truth::No,
            CertStatus::Inconclusive(_) => Truth::Inconclusive,
        }
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Certified => f.write_str("certified"),
            CertStatus::Refuted(_) => f.write_str("refuted"),
            CertStatus::Inconclusive(why) => write!(f, "inconclusive ({})", why),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Numeric,
}

/// Outcome of `check_moderate` or `check_compatible`, with the quantifier
/// trace and the search bounds.
#[derive(Clone, Debug)]
pub struct TemperateCertificate {
    pub map: String,
    pub family: String,
    pub role: Role,
    pub case: Direction,
    pub status: CertStatus,
    pub method: Method,
    /// `(m, M)` pairs established.
    pub trace: Vec<(u32, u32)>,
    pub detail: String,
    pub bound: u32,
}

impl TemperateCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::Certified
    }

    /// The `M` paired with `m` (case II moderate, case I compatible) or the
    /// `m` paired with `M` (the other two), whichever is the chosen index.
    fn chosen_for(&self, outer: u32) -> Option<u32> {
        let outer_is_small = outer_is_small_m(self.role, self.case);
        self.trace
            .iter()
            .find(|(m, big)| {
                if outer_is_small {
                    *m == outer
                } else {
                    *big == outer
                }
            })
            .map(|(m, big)| if outer_is_small { *big } else { *m })
    }

    /// Re-evaluates a refutation witness; `None` for non-refuted
    /// certificates.
    pub fn replay(&self, g: &ScalarMap, family: &WeightFamily) -> Option<bool> {
        match &self.status {
            CertStatus::Refuted(w) => Some(replay_witness(w, self.role, g, family)),
            _ => None,
        }
    }
}

impl fmt::Display for TemperateCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            Method::Exact => "exact",
            Method::Numeric => "numeric search",
        };
        writeln!(
            f,
            "{} is {} over {} [{}]: {} ({})",
            self.map, self.role, self.family, self.case, self.status, method
        )?;
        if !self.trace.is_empty() {
            let pairs: Vec<String> = self
                .trace
                .iter()
                .map(|(m, big)| format!("(m={}, M={})", m, big))
                .collect();
            writeln!(f, "  trace: {}", pairs.join(" "))?;
        }
        if !self.detail.is_empty() {
            writeln!(f, "  detail: {}", self.detail)?;
        }
        if let CertStatus::Refuted(w) = &self.status {
            writeln!(f, "  witness: {} ({})", w.fixed, w.note)?;
            for p in &w.failures {
                let reference = p.reference.map_or(String::new(), |(a, b)| {
                    format!(", below threshold on j in [{}, {}]", a, b)
                });
                writeln!(
                    f,
                    "    m={} M={} x={} n=2^j, j in [{}, {}]{}",
                    p.m,
                    p.big_m,
                    fmt_sig(p.x, 9),
                    p.window.0,
                    p.window.1,
                    reference
                )?;
            }
        }
        write!(
            f,
            "  bounds: m, M <= {}; x in [1e-8, 1e8]; n = 2^j, j <= {}",
            self.bound, N_EXP_MAX
        )
    }
}

fn outer_is_small_m(role: Role, case: Direction) -> bool {
    matches!(
        (role, case),
        (Role::Moderate, Direction::CaseII)
            | (Role::Compatible, Direction::CaseI)
            | (_, Direction::Single)
    )
}

fn single_term(w: &WeightSeq) -> Option<GrowthExpr> {
    let e = w.expr()?;
    e.single_term()?;
    Some(e.clone())
}

/// `ln Q = r^M_n · ln g(x^{1/r^m_n})`.
fn ln_q(g: &ScalarMap, rm: &WeightSeq, rbig: &WeightSeq, x: f64, n: u64) -> f64 {
    let (a, b) = (rm.eval(n), rbig.eval(n));
    b * g.ln_of_ln(x.ln() / a)
}

fn x_grid(role: Role) -> Vec<f64> {
    let hi = match role {
        Role::Moderate => X_HALF_DECADES.1,
        Role::Compatible => 0,
    };
    (X_HALF_DECADES.0..=hi)
        .map(|k| 10f64.powf(k as f64 / 2.0))
        .collect()
}

/// Growth of `ln Q` over `n = 2^j`, `j` in the window: any non-finite value,
/// or a final value above the early maximum by the margin after a rising
/// stretch.
fn grows(vals: &[f64]) -> bool {
    if vals
        .iter()
        .any(|v| !v.is_finite() && *v != f64::NEG_INFINITY)
    {
        return true;
    }
    let k = vals.len();
    let early = vals[..k / 2]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let rising = vals[k.saturating_sub(4)..].windows(2).all(|w| w[1] > w[0]);
    vals[k - 1] > early + GROWTH_MARGIN && rising
}

fn moderate_values(
    g: &ScalarMap,
    rm: &WeightSeq,
    rbig: &WeightSeq,
    x: f64,
    window: (u32, u32),
) -> Vec<f64> {
    (window.0..=window.1)
        .map(|j| ln_q(g, rm, rbig, x, 1u64 << j))
        .collect()
}

/// Numeric moderateness of one pair; the witness on failure.
fn moderate_pair_numeric(
    g: &ScalarMap,
    m: (u32, &WeightSeq),
    big: (u32, &WeightSeq),
) -> Result<(), PairWitness> {
    for x in x_grid(Role::Moderate) {
        let window = (1, N_EXP_MAX);
        if grows(&moderate_values(g, m.1, big.1, x, window)) {
            return Err(PairWitness {
                m: m.0,
                big_m: big.0,
                x,
                window,
                reference: None,
            });
        }
    }
    Ok(())
}

fn window_max(h: &ScalarMap, rm: &WeightSeq, rbig: &WeightSeq, x: f64, w: (u32, u32)) -> f64 {
    (w.0..=w.1)
        .map(|j| ln_q(h, rm, rbig, x, 1u64 << j))
        .fold(f64::NEG_INFINITY, |a, b| {
            if b.is_nan() {
                f64::INFINITY
            } else {
                a.max(b)
            }
        })
}

/// Index of the largest grid point below which every value on the window is
/// under the level; `None` when even the smallest point fails.
fn threshold(
    h: &ScalarMap,
    rm: &WeightSeq,
    rbig: &WeightSeq,
    grid: &[f64],
    w: (u32, u32),
) -> Option<usize> {
    let eps = COMPAT_EPS.ln();
    let mut t = None;
    for (i, &x) in grid.iter().enumerate() {
        if window_max(h, rm, rbig, x, w) < eps {
            t = Some(i);
        } else {
            break;
        }
    }
    t
}

/// Numeric uniform convergence of one pair: the threshold must exist and be
/// the same on every window.
fn compatible_pair_numeric(
    h: &ScalarMap,
    m: (u32, &WeightSeq),
    big: (u32, &WeightSeq),
) -> Result<(), PairWitness> {
    let grid = x_grid(Role::Compatible);
    let ts: Vec<Option<usize>> = WINDOWS
        .iter()
        .map(|w| threshold(h, m.1, big.1, &grid, *w))
        .collect();
    for (i, t) in ts.iter().enumerate() {
        if t.is_none() {
            return Err(PairWitness {
                m: m.0,
                big_m: big.0,
                x: grid[0],
                window: WINDOWS[i],
                reference: None,
            });
        }
    }
    let lowest = ts.iter().map(|t| t.unwrap()).min().unwrap();
    for (i, t) in ts.iter().enumerate() {
        let t = t.unwrap();
        if t != lowest {
            let bad = ts.iter().position(|s| s.unwrap() == lowest).unwrap();
            return Err(PairWitness {
                m: m.0,
                big_m: big.0,
                x: grid[lowest + 1],
                window: WINDOWS[bad],
                reference: Some(WINDOWS[i]),
            });
        }
    }
    Ok(())
}

fn pair_violates(role: Role, g: &ScalarMap, family: &WeightFamily, p: &PairWitness) -> bool {
    let (Some(rm), Some(rbig)) = (family.member(p.m), family.member(p.big_m)) else {
        return false;
    };
    match role {
        Role::Moderate => grows(&moderate_values(g, rm, rbig, p.x, p.window)),
        Role::Compatible => {
            let eps = COMPAT_EPS.ln();
            let bad = window_max(g, rm, rbig, p.x, p.window) >= eps;
            let below = p
                .reference
                .is_none_or(|w| window_max(g, rm, rbig, p.x, w) < eps);
            bad && below
        }
    }
}

fn replay_witness(w: &Witness, role: Role, g: &ScalarMap, family: &WeightFamily) -> bool {
    !w.failures.is_empty() && w.failures.iter().all(|p| pair_violates(role, g, family, p))
}

/// Exact decision for one pair, when the catalog and the weights allow it.
/// `Ok(detail)` when the pair works, `Err(witness)` when it fails.
fn exact_pair(
    role: Role,
    tag: &MapTag,
    m: (u32, &WeightSeq),
    big: (u32, &WeightSeq),
) -> Option<Result<String, PairWitness>> {
    let (rm, rbig) = (single_term(m.1)?, single_term(big.1)?);
    let ratio = rbig.mul(&rm.pow(-1.0).ok()?);
    let dom = ratio.compare(&GrowthExpr::one()).ok()?;
    let late = (4, N_EXP_MAX);
    let fail = |x: f64, window: (u32, u32)| {
        Err(PairWitness {
            m: m.0,
            big_m: big.0,
            x,
            window,
            reference: None,
        })
    };
    let power_like = |k: f64| -> Result<String, PairWitness> {
        match (role, dom) {
            (Role::Moderate, Dominance::Greater) => fail(1e8, late),
            (Role::Moderate, Dominance::SameOrder(rho)) => {
                Ok(format!("sup value x^{}", fmt_sig(k * rho, 9)))
            }
            (Role::Moderate, Dominance::Less) => Ok("r^M/r^m -> 0, values tend to 1".into()),
            (Role::Compatible, Dominance::Less) => Err(PairWitness {
                m: m.0,
                big_m: big.0,
                x: 10f64.powf(-8.0),
                window: WINDOWS[3],
                reference: Some(WINDOWS[0]),
            }),
            (Role::Compatible, Dominance::SameOrder(rho)) => {
                Ok(format!("x^{} -> 0 uniformly", fmt_sig(k * rho, 9)))
            }
            (Role::Compatible, Dominance::Greater) => {
                Ok("r^M/r^m -> inf, convergence only faster".into())
            }
        }
    };
    let ln_inv_m = rm.log_expr().ok()?.neg();
    Some(match (role, tag) {
        (_, MapTag::Power(k)) => power_like(*k),
        (Role::Moderate, MapTag::Poly(c)) => match c.iter().rposition(|v| *v > 0.0) {
            None | Some(0) => Ok("constant map".into()),
            Some(d) => power_like(d as f64),
        },
        (Role::Compatible, MapTag::Poly(c)) => match c.iter().position(|v| *v > 0.0) {
            None => Ok("zero map".into()),
            Some(0) => fail(10f64.powf(-8.0), WINDOWS[0]),
            Some(d) => power_like(d as f64),
        },
        (Role::Moderate, MapTag::Log1p) => {
            let lim = rbig.limit_of_product(&ln_inv_m).upper();
            if lim == crate::values::ExtReal::PosInf {
                fail(1e8, late)
            } else {
                Ok("r^M ln(1/r^m) stays bounded".into())
            }
        }
        (Role::Compatible, MapTag::Log1p) => power_like(1.0),
        (Role::Moderate, MapTag::Exp) => {
            let inv = m.1.inverse_expansion()?;
            let lnln: LogExpansion = rbig.log_expr().ok()?.add(&inv.scale(2.0));
            if lnln.divergence_sign() > 0 {
                fail(2f64.exp(), late)
            } else {
                return None;
            }
        }
        (Role::Compatible, MapTag::Exp) => fail(10f64.powf(-8.0), WINDOWS[0]),
        (Role::Compatible, MapTag::InvLog) => {
            let lim = rbig.limit_of_product(&ln_inv_m.neg()).upper();
            if lim == crate::values::ExtReal::NegInf {
                return None;
            }
            fail(10f64.powf(-8.0), WINDOWS[3])
        }
        _ => return None,
    })
}

/// Indices `1..=bound` present in the family, or the single member.
fn indices(family: &WeightFamily, bound: u32) -> Vec<u32> {
    family.members_up_to(bound).map(|(m, _)| *m).collect()
}

type PairCheck<'a> = dyn Fn(u32, u32) -> Result<String, PairWitness> + Sync + 'a;

/// The quantifier search `∀ outer ∃ inner`.
fn search(
    role: Role,
    family: &WeightFamily,
    bound: u32,
    check: &PairCheck<'_>,
) -> (CertStatus, Vec<(u32, u32)>, String) {
    let idx = indices(family, bound);
    let small_outer = outer_is_small_m(role, family.direction);
    let results: Vec<Result<((u32, u32), String), Witness>> = idx
        .par_iter()
        .map(|&outer| {
            let mut failures = Vec::new();
            for &inner in &idx {
                let (m, big) = if small_outer {
                    (outer, inner)
                } else {
                    (inner, outer)
                };
                match check(m, big) {
                    Ok(detail) => return Ok(((m, big), detail)),
                    Err(w) => failures.push(w),
                }
            }
            let fixed = if small_outer {
                Fixed::SmallM(outer)
            } else {
                Fixed::BigM(outer)
            };
            Err(Witness {
                fixed,
                failures,
                note: String::new(),
            })
        })
        .collect();
    let mut trace = Vec::new();
    let mut detail = String::new();
    for r in results {
        match r {
            Ok((pair, d)) => {
                if detail.is_empty() {
                    detail = d;
                }
                trace.push(pair);
            }
            Err(w) => return (CertStatus::Refuted(w), trace, detail),
        }
    }
    (CertStatus::Certified, trace, detail)
}

fn unsupported(family: &WeightFamily) -> Option<String> {
    family
        .members
        .iter()
        .any(|(_, w)| matches!(w.kind, WeightKind::EgorovStep(_)))
        .then(|| "step weights vanish for large n, so x^{1/r_n} is undefined".to_string())
}

fn certify(
    role: Role,
    g: &ScalarMap,
    family: &WeightFamily,
    numeric_only: bool,
) -> TemperateCertificate {
    let mut cert = TemperateCertificate {
        map: g.name.clone(),
        family: family.name.clone(),
        role,
        case: family.direction,
        status: CertStatus::Inconclusive(String::new()),
        method: Method::Numeric,
        trace: Vec::new(),
        detail: String::new(),
        bound: SEARCH_BOUND,
    };
    if let Some((a, b)) = g.monotonicity_violation() {
        cert.status = CertStatus::Inconclusive(format!(
            "not increasing: g({}) > g({})",
            fmt_sig(a, 9),
            fmt_sig(b, 9)
        ));
        return cert;
    }
    if let Some(why) = unsupported(family) {
        cert.status = CertStatus::Inconclusive(why);
        return cert;
    }
    if role == Role::Compatible && g.at_zero() > 0.0 {
        let first = indices(family, SEARCH_BOUND);
        let outer = first[0];
        let fixed = if outer_is_small_m(role, family.direction) {
            Fixed::SmallM(outer)
        } else {
            Fixed::BigM(outer)
        };
        let failures = first
            .iter()
            .map(|&inner| {
                let (m, big) = match fixed {
                    Fixed::SmallM(v) => (v, inner),
                    Fixed::BigM(v) => (inner, v),
                };
                PairWitness {
                    m,
                    big_m: big,
                    x: 10f64.powf(-8.0),
                    window: WINDOWS[0],
                    reference: None,
                }
            })
            .collect();
        cert.method = Method::Exact;
        cert.status = CertStatus::Refuted(Witness {
            fixed,
            failures,
            note: format!("h(0+) = {} != 0", fmt_sig(g.at_zero(), 9)),
        });
        return cert;
    }
    if !numeric_only {
        if let Some(MapTag::Compose(_, _)) = &g.tag {
            if let Some(c) = certify_composition(role, g, family) {
                return c;
            }
        }
        if let Some(tag) = &g.tag {
            let exact_ok = indices(family, SEARCH_BOUND).iter().all(|&m| {
                let w = family.member(m).unwrap();
                exact_pair(role, tag, (m, w), (m, w)).is_some()
            });
            if exact_ok {
                let (status, trace, detail) = search(role, family, SEARCH_BOUND, &|m, big| {
                    let (wm, wb) = (family.member(m).unwrap(), family.member(big).unwrap());
                    exact_pair(role, tag, (m, wm), (big, wb)).unwrap_or(Err(PairWitness {
                        m,
                        big_m: big,
                        x: 1.0,
                        window: (1, 1),
                        reference: None,
                    }))
                });
                cert.method = Method::Exact;
                cert.status = status;
                cert.trace = trace;
                cert.detail = detail;
                if let CertStatus::Refuted(w) = &mut cert.status {
                    w.note = "exponent comparison".into();
                }
                return cert;
            }
        }
    }
    let (status, trace, _) = search(role, family, SEARCH_BOUND, &|m, big| {
        let (wm, wb) = (family.member(m).unwrap(), family.member(big).unwrap());
        match role {
            Role::Moderate => moderate_pair_numeric(g, (m, wm), (big, wb)).map(|_| String::new()),
            Role::Compatible => {
                compatible_pair_numeric(g, (m, wm), (big, wb)).map(|_| String::new())
            }
        }
    });
    cert.status = status;
    cert.trace = trace;
    cert.detail = "certified up to the search bounds".into();
    if let CertStatus::Refuted(w) = &mut cert.status {
        w.note = "numeric probe".into();
        cert.detail.clear();
    }
    cert
}

fn tag_map(tag: &MapTag) -> ScalarMap {
    match tag {
        MapTag::Power(k) => ScalarMap::power(*k),
        MapTag::Exp => ScalarMap::exp(),
        MapTag::Log1p => ScalarMap::log1p(),
        MapTag::Poly(c) => ScalarMap::poly(c),
        MapTag::InvLog => ScalarMap::inv_log(),
        MapTag::Compose(a, b) => ScalarMap::compose(&tag_map(a), &tag_map(b)),
    }
}

/// Composition of two certified maps is certified: chain the chosen indices.
fn certify_composition(
    role: Role,
    g: &ScalarMap,
    family: &WeightFamily,
) -> Option<TemperateCertificate> {
    let Some(MapTag::Compose(o, i)) = &g.tag else {
        return None;
    };
    let (outer, inner) = (
        certify(role, &tag_map(o), family, false),
        certify(role, &tag_map(i), family, false),
    );
    if !(outer.is_certified() && inner.is_certified()) {
        return None;
    }
    let small_outer = outer_is_small_m(role, family.direction);
    let mut trace = Vec::new();
    for q in indices(family, SEARCH_BOUND) {
        // moderate case II: m -> M1 (inner) -> M2 (outer); the other
        // orders run the chain from the outer map's side.
        let pair = if small_outer {
            let mid = inner.chosen_for(q)?;
            (q, outer.chosen_for(mid)?)
        } else {
            let mid = outer.chosen_for(q)?;
            (inner.chosen_for(mid)?, q)
        };
        trace.push(pair);
    }
    Some(TemperateCertificate {
        map: g.name.clone(),
        family: family.name.clone(),
        role,
        case: family.direction,
        status: CertStatus::Certified,
        method: Method::Exact,
        trace,
        detail: format!(
            "composition of certified maps {} and {}",
            outer.map, inner.map
        ),
        bound: SEARCH_BOUND,
    })
}

/// Decides whether `g` is r-moderate over the family: exactly for catalog
/// maps with symbolic single-term weights, by bounded search otherwise.
pub fn check_moderate(g: &ScalarMap, family: &WeightFamily) -> TemperateCertificate {
    certify(Role::Moderate, g, family, false)
}

/// Decides whether `h` is r-compatible over the family.
pub fn check_compatible(h: &ScalarMap, family: &WeightFamily) -> TemperateCertificate {
    certify(Role::Compatible, h, family, false)
}

/// The bounded numeric search alone, ignoring catalog tags.
pub fn check_numeric(role: Role, g: &ScalarMap, family: &WeightFamily) -> TemperateCertificate {
    certify(role, g, family, true)
}

/// `g(x_n)` as a sequence: exact for power maps on symbolic input.
pub fn push_forward(g: &ScalarMap, x: &SeqRep) -> Result<SeqRep, SeqError> {
    if let (Some(MapTag::Power(k)), Some(e)) = (&g.tag, x.expr()) {
        if let Ok(p) = e.pow(*k) {
            return Ok(SeqRep::symbolic(p));
        }
    }
    let (g2, x2) = (g.clone(), x.clone());
    SeqRep::sampled_ln(
        format!("{}({})", g.name, x.label),
        16,
        1 << N_EXP_MAX,
        move |n| g2.ln_of_ln(x2.ln_eval(n)),
    )
}

/// Classifies `g(x_n)` over the family.
pub fn classify_image(
    g: &ScalarMap,
    x: &SeqRep,
    space: &Space,
) -> Result<Classification, SeqError> {
    let img = push_forward(g, x)?;
    classify(&[img], &space.family, space.mode, space.m_max)
}

/// `q = p_ν ↦ p = λ_ν · p_{ν+shift}`.
#[derive(Clone)]
pub struct SeminormPairing {
    pub shift: usize,
    scale: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    pub label: String,
}

impl SeminormPairing {
    pub fn new(
        shift: usize,
        label: impl Into<String>,
        scale: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SeminormPairing {
            shift,
            scale: Arc::new(scale),
            label: label.into(),
        }
    }

    pub fn scale(&self, nu: usize) -> f64 {
        (self.scale)(nu)
    }
}

type Apply = Arc<dyn Fn(&Fun) -> Fun + Send + Sync>;
type Increment = Arc<dyn Fn(&Fun, &Fun) -> Fun + Send + Sync>;

/// A map on function sequences with its claimed bounds: `(α)` with
/// `g_alpha`, `(β)` with `g_beta · h`.
#[derive(Clone)]
pub struct FunctionMap {
    pub name: String,
    apply: Apply,
    increment: Increment,
    pub pairing: Option<SeminormPairing>,
    pub g_alpha: ScalarMap,
    pub g_beta: ScalarMap,
    pub h: ScalarMap,
}

impl fmt::Debug for FunctionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionMap({})", self.name)
    }
}

impl FunctionMap {
    /// A custom map. `increment(f, k)` must equal `φ(f+k) − φ(f)`; a
    /// cancellation-free form is preferable.
    pub fn new(
        name: impl Into<String>,
        apply: impl Fn(&Fun) -> Fun + Send + Sync + 'static,
        increment: impl Fn(&Fun, &Fun) -> Fun + Send + Sync + 'static,
        pairing: Option<SeminormPairing>,
        g_alpha: ScalarMap,
        g_beta: ScalarMap,
        h: ScalarMap,
    ) -> Self {
        FunctionMap {
            name: name.into(),
            apply: Arc::new(apply),
            increment: Arc::new(increment),
            pairing,
            g_alpha,
            g_beta,
            h,
        }
    }

    /// `f ↦ f²`: Leibniz gives `p_ν(f²) ≤ 2^ν p_ν(f)²`, so with
    /// `p = 2^ν p_ν` the bounds are `g(y) = y²` for (α) and
    /// `2(1+y)·(z+z²)` for (β), from `2fk + k²`.
    pub fn square() -> Self {
        Self::new(
            "square",
            |f| lib::square(f.clone()),
            |f, k| {
                lib::sum(
                    lib::scaled(lib::product(f.clone(), k.clone()), 2.0),
                    lib::square(k.clone()),
                )
            },
            Some(SeminormPairing::new(0, "p_nu -> 2^nu p_nu", |nu| {
                2f64.powi(nu as i32)
            })),
            ScalarMap::power(2.0),
            ScalarMap::affine(2.0, 2.0),
            ScalarMap::poly(&[0.0, 1.0, 1.0]),
        )
    }

    /// `f ↦ f′`, linear: `p_ν(f′) ≤ p_{ν+1}(f)`.
    pub fn derivative() -> Self {
        Self::new(
            "d/dx",
            |f| lib::derivative(f.clone(), 1),
            |_, k| lib::derivative(k.clone(), 1),
            Some(SeminormPairing::new(1, "p_nu -> p_{nu+1}", |_| 1.0)),
            ScalarMap::identity(),
            ScalarMap::affine(1.0, 1.0),
            ScalarMap::identity(),
        )
    }

    pub fn identity() -> Self {
        Self::new(
            "identity",
            |f| f.clone(),
            |_, k| k.clone(),
            Some(SeminormPairing::new(0, "p_nu -> p_nu", |_| 1.0)),
            ScalarMap::identity(),
            ScalarMap::affine(1.0, 1.0),
            ScalarMap::identity(),
        )
    }

    /// `f ↦ e^f`, claimed bounded by the catalog map `g`; the claim fails.
    pub fn exp(g: ScalarMap) -> Self {
        Self::new(
            "exp",
            |f| lib::exp(f.clone()),
            |f, k| lib::exp_increment(f.clone(), k.clone()),
            Some(SeminormPairing::new(0, "p_nu -> p_nu", |_| 1.0)),
            g.clone(),
            g,
            ScalarMap::identity(),
        )
    }

    pub fn apply(&self, f: &Fun) -> Fun {
        (self.apply)(f)
    }

    /// `φ(f+k) − φ(f)`.
    pub fn increment(&self, f: &Fun, k: &Fun) -> Fun {
        (self.increment)(f, k)
    }
}

/// A violated seminorm inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityWitness {
    pub condition: &'static str,
    pub f: String,
    pub k: Option<String>,
    pub nu: usize,
    pub n: u64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

impl fmt::Display for InequalityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) fails for f = {}", self.condition, self.f)?;
        if let Some(k) = &self.k {
            write!(f, ", k = {}", k)?;
        }
        write!(
            f,
            " at nu = {}, n = {}: ln lhs = {} > ln rhs = {}",
            self.nu,
            self.n,
            fmt_sig(self.ln_lhs, 9),
            fmt_sig(self.ln_rhs, 9)
        )
    }
}

/// Outcome of `check_temperate`.
#[derive(Clone, Debug)]
pub struct TemperateReport {
    pub map: String,
    pub pairing: String,
    pub status: Truth,
    pub g_alpha: TemperateCertificate,
    pub g_beta: TemperateCertificate,
    pub h: TemperateCertificate,
    pub checks: usize,
    pub violation: Option<InequalityWitness>,
    pub note: String,
}

impl fmt::Display for TemperateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.status {
            Truth::Yes => "certified on the probe corpus",
            Truth::No => "refuted",
            Truth::Inconclusive => "inconclusive",
        };
        writeln!(
            f,
            "{} continuously r-temperate: {} ({} inequality checks, pairing {})",
            self.map, s, self.checks, self.pairing
        )?;
        if !self.note.is_empty() {
            writeln!(f, "  {}", self.note)?;
        }
        if let Some(v) = &self.violation {
            writeln!(f, "  witness: {}", v)?;
        }
        writeln!(
            f,
            "  (alpha) g = {}: {}",
            self.g_alpha.map, self.g_alpha.status
        )?;
        writeln!(
            f,
            "  (beta)  g = {}: {}",
            self.g_beta.map, self.g_beta.status
        )?;
        write!(f, "  (beta)  h = {}: {}", self.h.map, self.h.status)
    }
}

/// Probe configuration for `check_temperate`.
#[derive(Clone, Debug)]
pub struct TemperateProbe {
    pub nu_max: usize,
    pub indices: Vec<u64>,
}

impl Default for TemperateProbe {
    fn default() -> Self {
        TemperateProbe {
            nu_max: 2,
            indices: vec![16, 64, 256],
        }
    }
}

/// Checks (α) and (β) on a corpus: every `f` in `fs` for (α), every pair
/// `(f, k)` for (β), every `ν ≤ nu_max` and sampled `n`. The scalar bounds
/// are certified over the family first.
pub fn check_temperate(
    phi: &FunctionMap,
    family: &WeightFamily,
    fs: &[Fun],
    ks: &[Fun],
    probe: &TemperateProbe,
) -> Result<TemperateReport, TemperateError> {
    let pairing = phi
        .pairing
        .clone()
        .ok_or_else(|| TemperateError::MissingPairing(phi.name.clone()))?;
    let mut report = TemperateReport {
        map: phi.name.clone(),
        pairing: pairing.label.clone(),
        status: Truth::Yes,
        g_alpha: check_moderate(&phi.g_alpha, family),
        g_beta: check_moderate(&phi.g_beta, family),
        h: check_compatible(&phi.h, family),
        checks: 0,
        violation: None,
        note: String::new(),
    };
    let ln_p = |f: &Fun, n: u64, nu: usize| -> Result<f64, GenfunError> {
        Ok(pairing.scale(nu).ln() + ln_seminorm(f.as_ref(), n, nu + pairing.shift)?)
    };
    let mut jobs: Vec<(usize, Option<usize>, usize, u64)> = Vec::new();
    for (i, _) in fs.iter().enumerate() {
        for nu in 0..=probe.nu_max {
            for &n in &probe.indices {
                jobs.push((i, None, nu, n));
                for (j, _) in ks.iter().enumerate() {
                    jobs.push((i, Some(j), nu, n));
                }
            }
        }
    }
    let images: Vec<Fun> = fs.iter().map(|f| phi.apply(f)).collect();
    let results: Vec<Result<Option<InequalityWitness>, GenfunError>> = jobs
        .par_iter()
        .map(|&(i, j, nu, n)| {
            let f = &fs[i];
            let (cond, lhs, rhs, k) = match j {
                None => {
                    let lhs = ln_seminorm(images[i].as_ref(), n, nu)?;
                    ("alpha", lhs, phi.g_alpha.ln_of_ln(ln_p(f, n, nu)?), None)
                }
                Some(j) => {
                    let k = &ks[j];
                    let lhs = ln_seminorm(phi.increment(f, k).as_ref(), n, nu)?;
                    let rhs =
                        phi.g_beta.ln_of_ln(ln_p(f, n, nu)?) + phi.h.ln_of_ln(ln_p(k, n, nu)?);
                    ("beta", lhs, rhs, Some(k.label()))
                }
            };
            let ok = lhs == f64::NEG_INFINITY || lhs <= rhs + INEQ_TOL * rhs.abs().max(1.0);
            Ok((!ok).then(|| InequalityWitness {
                condition: cond,
                f: f.label(),
                k,
                nu,
                n,
                ln_lhs: lhs,
                ln_rhs: rhs,
            }))
        })
        .collect();
    for r in results {
        report.checks += 1;
        if let Some(w) = r? {
            if report.violation.is_none() {
                report.violation = Some(w);
            }
        }
    }
    let bounds_ok = [&report.g_alpha, &report.g_beta, &report.h]
        .iter()
        .all(|c| c.is_certified());
    report.status = if report.violation.is_some() {
        Truth::No
    } else if bounds_ok {
        Truth::Yes
    } else {
        report.note = "inequalities hold on the corpus but a bounding map is not certified".into();
        Truth::Inconclusive
    };
    Ok(report)
}

/// The componentwise image `φ(f) = (φ(f_n))_n` with its classification.
#[derive(Clone)]
pub struct Extension {
    pub rep: Fun,
    pub classification: Classification,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Extension({}: {})",
            self.rep.label(),
            self.classification.verdict
        )
    }
}

fn moderate_enough(c: &Classification) -> bool {
    matches!(
        c.verdict,
        Verdict::Moderate | Verdict::Boundary | Verdict::Negligible
    )
}

/// Applies a certified map to a representative; the image must classify
/// moderate, otherwise the certificate is reported unsound for this input.
pub fn extend(
    phi: &FunctionMap,
    cert: &TemperateReport,
    f: &Fun,
    space: &Space,
    nu_max: usize,
) -> Result<Extension, TemperateError> {
    if cert.map != phi.name || cert.status != Truth::Yes {
        return Err(TemperateError::NotCertified {
            map: phi.name.clone(),
            status: format!("{:?}", cert.status),
        });
    }
    let input = classify_fun(
        f,
        nu_max + phi.pairing.as_ref().map_or(0, |p| p.shift),
        space,
    )?;
    if !moderate_enough(&input) {
        return Err(TemperateError::InputNotModerate {
            input: f.label(),
            verdict: input.verdict.to_string(),
        });
    }
    let rep = phi.apply(f);
    let classification = classify_fun(&rep, nu_max, space)?;
    if !moderate_enough(&classification) {
        return Err(TemperateError::ExtensionNotModerate {
            map: phi.name.clone(),
            input: f.label(),
            verdict: classification.verdict.to_string(),
        });
    }
    Ok(Extension {
        rep,
        classification,
    })
}

/// Outcome of the representative-independence check.
#[derive(Clone, Debug)]
pub struct F2Report {
    pub pass: Truth,
    pub difference: Classification,
}

/// Classifies `φ(f + j) − φ(f)` for negligible `j`; passes iff negligible.
/// `check_j` re-verifies the precondition on `j`.
pub fn verify_f2(
    phi: &FunctionMap,
    f: &Fun,
    j: &Fun,
    space: &Space,
    nu_max: usize,
    check_j: bool,
) -> Result<F2Report, TemperateError> {
    if check_j {
        let cj = classify_fun(j, nu_max, space)?;
        if cj.in_k.is_no() {
            return Err(TemperateError::NotNegligible {
                input: j.label(),
                verdict: cj.verdict.to_string(),
            });
        }
    }
    let difference = classify_fun(&phi.increment(f, j), nu_max, space)?;
    Ok(F2Report {
        pass: difference.in_k,
        difference,
    })
}

/// `⟦φ(f + k_i) − φ(f)⟧` for `k_i = n^{-i ln 10} k`, whose ultranorms shrink
/// by a factor 10 per step; the maximum over `p_0..p_nu_max` is reported.
pub fn continuity_trend(
    phi: &FunctionMap,
    f: &Fun,
    k: &Fun,
    steps: usize,
    space: &Space,
    nu_max: usize,
) -> Result<Vec<f64>, TemperateError> {
    let r = space
        .single_weight()
        .ok_or(TemperateError::NeedsSingleWeight)?
        .clone();
    (0..steps)
        .map(|i| {
            let ki = lib::ln_scaled(
                k.clone(),
                format!("n^-{}", i as f64 * 10f64.ln()),
                move |n| -(i as f64) * 10f64.ln() * (n as f64).ln(),
            );
            let bundle = seminorm_bundle(&phi.increment(f, &ki), nu_max)?;
            let mut best = 0.0f64;
            for ch in &bundle {
                let v = ultranorm(ch, &r)?;
                best = best.max(v.value);
            }
            Ok(best)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs() -> WeightFamily {
        WeightFamily::colombeau_scale(1, 16).unwrap()
    }

    #[test]
    fn power_maps_are_moderate_with_diagonal_trace() {
        let c = check_moderate(&ScalarMap::power(3.0), &cs());
        assert!(c.is_certified(), "{}", c);
        assert_eq!(c.method, Method::Exact);
        assert!(
            c.trace.iter().all(|(m, big)| m == big || *big < *m),
            "{}",
            c
        );
        let id = check_moderate(&ScalarMap::identity(), &cs());
        assert!(id.is_certified());
    }

    #[test]
    fn exp_is_refuted_with_replayable_witness() {
        let fam = cs();
        let c = check_moderate(&ScalarMap::exp(), &fam);
        let CertStatus::Refuted(w) = &c.status else {
            panic!("{}", c)
        };
        assert_eq!(w.fixed, Fixed::SmallM(1));
        assert!((w.failures[0].x - 2f64.exp()).abs() < 1e-12);
        assert_eq!(w.failures.len(), 16);
        assert_eq!(c.replay(&ScalarMap::exp(), &fam), Some(true));
        // a witness built for another map does not replay
        assert!(!replay_witness(
            w,
            Role::Moderate,
            &ScalarMap::power(2.0),
            &fam
        ));
    }

    #[test]
    fn compatibility_examples() {
        let fam = cs();
        let c = check_compatible(&ScalarMap::power(0.5), &fam);
        assert!(c.is_certified(), "{}", c);
        let c = check_compatible(&ScalarMap::affine(1.0, 1.0), &fam);
        assert!(matches!(c.status, CertStatus::Refuted(_)));
        assert_eq!(c.replay(&ScalarMap::affine(1.0, 1.0), &fam), Some(true));
        let c = check_compatible(&ScalarMap::inv_log(), &fam);
        assert!(matches!(c.status, CertStatus::Refuted(_)), "{}", c);
        assert_eq!(c.replay(&ScalarMap::inv_log(), &fam), Some(true));
    }

    #[test]
    fn exact_and_numeric_agree_on_the_catalog() {
        let maps = [
            ScalarMap::power(2.0),
            ScalarMap::power(0.5),
            ScalarMap::identity(),
            ScalarMap::exp(),
            ScalarMap::log1p(),
            ScalarMap::affine(2.0, 1.0),
            ScalarMap::poly(&[0.0, 1.0, 1.0]),
            ScalarMap::inv_log(),
        ];
        for fam in [
            cs(),
            WeightFamily::ultra(2, 8).unwrap(),
            WeightFamily::colombeau(),
        ] {
            for g in &maps {
                for role in [Role::Moderate, Role::Compatible] {
                    if role == Role::Moderate && g.tag == Some(MapTag::InvLog) {
                        continue;
                    }
                    let exact = certify(role, g, &fam, false);
                    let num = check_numeric(role, g, &fam);
                    assert_eq!(
                        exact.status.truth(),
                        num.status.truth(),
                        "{} {} over {}:\n{}\n{}",
                        g.name,
                        role,
                        fam.name,
                        exact,
                        num
                    );
                    if let CertStatus::Refuted(_) = num.status {
                        assert_eq!(num.replay(g, &fam), Some(true));
                    }
                }
            }
        }
    }

    #[test]
    fn compositions_chain_their_traces() {
        let g = ScalarMap::compose(&ScalarMap::power(2.0), &ScalarMap::affine(1.0, 1.0));
        let c = check_moderate(&g, &cs());
        assert!(c.is_certified(), "{}", c);
        assert_eq!(c.trace.len(), 16);
        let bad = ScalarMap::compose(&ScalarMap::exp(), &ScalarMap::identity());
        assert!(!check_moderate(&bad, &cs()).is_certified());
    }

    #[test]
    fn pushed_forward_images_stay_in_their_class() {
        let sp = Space::colombeau();
        for s in ["n^3", "log(n)^2 + 5", "n^-1"] {
            let x = SeqRep::parse(s).unwrap();
            let c = classify_image(&ScalarMap::power(2.0), &x, &sp).unwrap();
            assert!(c.in_f.is_yes(), "{}: {}", s, c);
        }
        for s in ["exp(-n)", "exp(-log(n)^2)"] {
            let x = SeqRep::parse(s).unwrap();
            let c = classify_image(&ScalarMap::power(0.5), &x, &sp).unwrap();
            assert!(c.in_k.is_yes(), "{}: {}", s, c);
        }
    }

    #[test]
    fn derivative_is_temperate_and_exp_is_not() {
        let fam = WeightFamily::colombeau();
        let fs = vec![lib::sin(), lib::delta()];
        let ks = vec![lib::ln_scaled(lib::sin(), "e^-n", |n| -(n as f64))];
        let probe = TemperateProbe {
            nu_max: 1,
            indices: vec![16, 64],
        };
        let r = check_temperate(&FunctionMap::derivative(), &fam, &fs, &ks, &probe).unwrap();
        assert_eq!(r.status, Truth::Yes, "{}", r);
        let r = check_temperate(
            &FunctionMap::exp(ScalarMap::power(8.0)),
            &fam,
            &fs,
            &ks,
            &probe,
        )
        .unwrap();
        assert_eq!(r.status, Truth::No, "{}", r);
        assert_eq!(r.violation.as_ref().unwrap().condition, "alpha");
        let mut no_pair = FunctionMap::identity();
        no_pair.pairing = None;
        assert!(matches!(
            check_temperate(&no_pair, &fam, &fs, &ks, &probe),
            Err(TemperateError::MissingPairing(_))
        ));
    }
}
