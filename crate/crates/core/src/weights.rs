//! Weight sequences, monotone weight families and asymptotic scales.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::asymptotics::{
    atom_expr, AsymptoticsError, Dominance, GrowthExpr, LogAtom, LogExpansion,
};
use crate::values::Mode;

/// Indices where the declared direction of a family is checked pointwise.
pub const DIRECTION_PROBES: [u64; 5] = [2, 10, 100, 10_000, 1_000_000];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightsError {
    #[error("unknown weight family '{0}'")]
    UnknownName(String),
    #[error("bad parameters for '{name}': {msg}")]
    BadParams { name: String, msg: String },
    #[error("declared direction fails between members {m} and {next} at n = {n}: {lhs} vs {rhs}")]
    Monotonicity {
        m: u32,
        next: u32,
        n: u64,
        lhs: f64,
        rhs: f64,
    },
    #[error("log a_{m} vanishes identically, so 1/|log a_{m}| is undefined")]
    ZeroLog { m: i32 },
    #[error("weight {0} does not decrease to zero")]
    NotDecreasing(String),
    #[error(transparent)]
    Expr(#[from] AsymptoticsError),
}

pub type Evaluator = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    Symbolic(GrowthExpr),
    /// `1` for `n <= m`, `0` afterwards; `0^0 = 0` applies.
    EgorovStep(u32),
    Sampled(Evaluator),
}

/// A weight sequence `r`, positive and decreasing to zero (step weights
/// excepted).
#[derive(Clone)]
pub struct WeightSeq {
    pub kind: WeightKind,
    pub description: String,
}

impl fmt::Debug for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSeq({})", self.description)
    }
}

impl WeightSeq {
    pub fn symbolic(expr: GrowthExpr) -> Self {
        let description = expr.to_string();
        WeightSeq {
            kind: WeightKind::Symbolic(expr),
            description,
        }
    }

    pub fn parse(text: &str) -> Result<Self, WeightsError> {
        let w = Self::symbolic(text.parse()?);
        w.validate()?;
        Ok(w)
    }

    pub fn egorov(m: u32) -> Self {
        WeightSeq {
            kind: WeightKind::EgorovStep(m),
            description: format!("egorov step m={}", m),
        }
    }

    pub fn sampled(
        description: impl Into<String>,
        f: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WeightSeq {
            kind: WeightKind::Sampled(Arc::new(f)),
            description: description.into(),
        }
    }

    pub fn expr(&self) -> Option<&GrowthExpr> {
        match &self.kind {
            WeightKind::Symbolic(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_egorov(&self) -> bool {
        matches!(self.kind, WeightKind::EgorovStep(_))
    }

    pub fn eval(&self, n: u64) -> f64 {
        match &self.kind {
            WeightKind::Symbolic(e) => e.eval(n as f64),
            WeightKind::EgorovStep(m) => {
                if n <= *m as u64 {
                    1.0
                } else {
                    0.0
                }
            }
            WeightKind::Sampled(f) => f(n),
        }
    }

    /// `1/r_n` as a log expansion when `r` is a single symbolic term; this is
    /// the exponent rate of the dual weights `e^{s/r_n}`.
    pub fn inverse_expansion(&self) -> Option<LogExpansion> {
        let t = self.expr()?.single_term()?.powf(-1.0);
        if !t.exp_part().is_empty() {
            return None;
        }
        let (a, b, c) = (t.pow_n(), t.pow_log(), t.pow_loglog());
        let atom = if c == 0.0 && (a > 0.0 || (a == 0.0 && b > 0.0)) {
            LogAtom::power(a, b)
        } else if a == 0.0 && b == 0.0 && c == 1.0 {
            LogAtom::LOGLOG
        } else {
            return None;
        };
        Some(LogExpansion::atom(atom, t.coeff()))
    }

    /// Checks positivity and decrease to zero: symbolically for expressions,
    /// on the probe set for sampled weights.
    pub fn validate(&self) -> Result<(), WeightsError> {
        match &self.kind {
            WeightKind::EgorovStep(_) => Ok(()),
            WeightKind::Symbolic(e) => {
                if e.is_zero() || !e.tends_to_zero() {
                    return Err(WeightsError::NotDecreasing(self.description.clone()));
                }
                Ok(())
            }
            WeightKind::Sampled(f) => {
                let vals: Vec<f64> = DIRECTION_PROBES.iter().map(|&n| f(n)).collect();
                let ok = vals.iter().all(|v| *v >= 0.0 && v.is_finite())
                    && vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
                    && *vals.last().unwrap() < vals[0];
                if ok {
                    Ok(())
                } else {
                    Err(WeightsError::NotDecreasing(self.description.clone()))
                }
            }
        }
    }
}

/// Ordering of consecutive members of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Single,
    /// `r^{m+1} <= r^m`: moderate is a union, negligible an intersection.
    CaseII,
    /// `r^{m+1} >= r^m`: moderate is an intersection, negligible a union.
    CaseI,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Single => "single",
            Direction::CaseII => "case-II (r^{m+1} <= r^m)",
            Direction::CaseI => "case-I (r^{m+1} >= r^m)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct WeightFamily {
    pub name: String,
    pub members: Vec<(u32, WeightSeq)>,
    pub direction: Direction,
    pub default_mode: Mode,
}

impl WeightFamily {
    pub fn single(name: impl Into<String>, r: WeightSeq, mode: Mode) -> Self {
        WeightFamily {
            name: name.into(),
            members: vec![(1, r)],
            direction: Direction::Single,
            default_mode: mode,
        }
    }

    /// Builds a family and verifies its declared direction on the probe set.
    pub fn new(
        name: impl Into<String>,
        members: Vec<(u32, WeightSeq)>,
        direction: Direction,
    ) -> Result<Self, WeightsError> {
        let fam = WeightFamily {
            name: name.into(),
            members,
            direction,
            default_mode: Mode::Standard,
        };
        if fam.members.is_empty() {
            return Err(WeightsError::BadParams {
                name: fam.name,
                msg: "no members".into(),
            });
        }
        fam.verify_direction()?;
        Ok(fam)
    }

    pub fn member(&self, m: u32) -> Option<&WeightSeq> {
        self.members.iter().find(|(k, _)| *k == m).map(|(_, w)| w)
    }

    /// The only member of a single-weight family.
    pub fn single_weight(&self) -> Option<&WeightSeq> {
        match self.direction {
            Direction::Single => self.members.first().map(|(_, w)| w),
            _ => None,
        }
    }

    /// Members with index at most `m_max`.
    pub fn members_up_to(&self, m_max: u32) -> impl Iterator<Item = &(u32, WeightSeq)> {
        self.members.iter().filter(move |(m, _)| *m <= m_max)
    }

    pub fn verify_direction(&self) -> Result<(), WeightsError> {
        if self.direction == Direction::Single {
            return Ok(());
        }
        for pair in self.members.windows(2) {
            let ((m, a), (next, b)) = (&pair[0], &pair[1]);
            for &n in DIRECTION_PROBES.iter() {
                let (x, y) = (a.eval(n), b.eval(n));
                let tol = 1e-12 * x.abs().max(y.abs());
                let ok = match self.direction {
                    Direction::CaseII => y <= x + tol,
                    Direction::CaseI => y + tol >= x,
                    Direction::Single => true,
                };
                if !ok {
                    return Err(WeightsError::Monotonicity {
                        m: *m,
                        next: *next,
                        n,
                        lhs: x,
                        rhs: y,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn colombeau() -> Self {
        let r = WeightSeq::symbolic(GrowthExpr::from_term(
            crate::asymptotics::GrowthTerm::new(1.0, 0.0, -1.0, 0.0, vec![]).expect("1/log n"),
        ));
        WeightFamily::single("colombeau", r, Mode::Standard)
    }

    /// `r^m = 1/(m log n)` for `m` in `lo..=hi`: the Colombeau weight spread
    /// into a decreasing family.
    pub fn colombeau_scale(lo: u32, hi: u32) -> Result<Self, WeightsError> {
        if lo < 1 || hi < lo {
            return Err(WeightsError::BadParams {
                name: "colombeau-scale".into(),
                msg: format!("need 1 <= lo <= hi, got {}..{}", lo, hi),
            });
        }
        let members = (lo..=hi)
            .map(|m| {
                let t = crate::asymptotics::GrowthTerm::new(1.0 / m as f64, 0.0, -1.0, 0.0, vec![])
                    .expect("1/(m log n)");
                (m, WeightSeq::symbolic(GrowthExpr::from_term(t)))
            })
            .collect();
        WeightFamily::new(
            format!("colombeau-scale:{}..{}", lo, hi),
            members,
            Direction::CaseII,
        )
    }

    /// `r^m = 1/n^{m/(m-1)}` for `m` in `lo..=hi`, `lo >= 2`.
    pub fn ultra(lo: u32, hi: u32) -> Result<Self, WeightsError> {
        if lo < 2 || hi < lo {
            return Err(WeightsError::BadParams {
                name: "ultra".into(),
                msg: format!("need 2 <= lo <= hi, got {}..{}", lo, hi),
            });
        }
        let members = (lo..=hi)
            .map(|m| {
                let p = m as f64 / (m as f64 - 1.0);
                (m, WeightSeq::symbolic(GrowthExpr::n_pow(1.0, -p)))
            })
            .collect();
        WeightFamily::new(format!("ultra:{}..{}", lo, hi), members, Direction::CaseI)
    }

    pub fn egorov(lo: u32, hi: u32) -> Result<Self, WeightsError> {
        if hi < lo {
            return Err(WeightsError::BadParams {
                name: "egorov".into(),
                msg: format!("empty range {}..{}", lo, hi),
            });
        }
        let members = (lo..=hi).map(|m| (m, WeightSeq::egorov(m))).collect();
        WeightFamily::new(format!("egorov:{}..{}", lo, hi), members, Direction::CaseI)
    }

    pub fn infra_exponential() -> Self {
        WeightFamily::single(
            "infra-exponential",
            WeightSeq::symbolic(GrowthExpr::n_pow(1.0, -1.0)),
            Mode::UnitBall,
        )
    }

    /// User expressions as members `1, 2, ...`; the direction is inferred.
    pub fn custom(exprs: &[&str]) -> Result<Self, WeightsError> {
        let mut members = Vec::new();
        for (i, e) in exprs.iter().enumerate() {
            members.push((i as u32 + 1, WeightSeq::parse(e)?));
        }
        if members.len() == 1 {
            let (_, w) = members.pop().unwrap();
            return Ok(WeightFamily::single("custom", w, Mode::Standard));
        }
        let direction = infer_direction(&members).ok_or_else(|| WeightsError::BadParams {
            name: "custom".into(),
            msg: "members are not monotone in m".into(),
        })?;
        WeightFamily::new("custom", members, direction)
    }

    /// Weights of the iterated-exponential scale `a_m = 1/exp^m(n)`, i.e.
    /// `r^m = 1/exp^{m-1}(n)`, evaluated numerically.
    pub fn exp_tower(lo: u32, hi: u32) -> Result<Self, WeightsError> {
        if lo < 1 || hi < lo || hi > 3 {
            return Err(WeightsError::BadParams {
                name: "exp-tower".into(),
                msg: "members must lie in 1..3".into(),
            });
        }
        let members = (lo..=hi)
            .map(|m| {
                let w = WeightSeq::sampled(format!("1/exp^{}(n)", m - 1), move |n| {
                    let mut v = n as f64;
                    for _ in 1..m {
                        v = v.exp();
                    }
                    1.0 / v
                });
                (m, w)
            })
            .collect();
        WeightFamily::new(
            format!("exp-tower:{}..{}", lo, hi),
            members,
            Direction::CaseII,
        )
    }

    /// Parses a family descriptor such as `colombeau`, `colombeau-scale:1..16`,
    /// `ultra:2..8`,
    /// `egorov:1..16`, `infra-exponential`, `custom:1/log(n);1/n`,
    /// `scale:power`, `scale:exp` or `exp-tower:1..3`.
    pub fn from_descriptor(desc: &str) -> Result<Self, WeightsError> {
        let (name, params) = match desc.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (desc.trim(), None),
        };
        let range = |default: (u32, u32)| -> Result<(u32, u32), WeightsError> {
            match params {
                None => Ok(default),
                Some(p) => parse_range(p).ok_or_else(|| WeightsError::BadParams {
                    name: name.into(),
                    msg: format!("expected LO..HI, got '{}'", p),
                }),
            }
        };
        match name {
            "colombeau" => Ok(Self::colombeau()),
            "colombeau-scale" => {
                let (lo, hi) = range((1, 16))?;
                Self::colombeau_scale(lo, hi)
            }
            "infra-exponential" | "infra" => Ok(Self::infra_exponential()),
            "ultra" => {
                let (lo, hi) = range((2, 16))?;
                Self::ultra(lo, hi)
            }
            "egorov" => {
                let (lo, hi) = range((1, 16))?;
                Self::egorov(lo, hi)
            }
            "exp-tower" => {
                let (lo, hi) = range((1, 3))?;
                Self::exp_tower(lo, hi)
            }
            "custom" => {
                let p = params.ok_or_else(|| WeightsError::BadParams {
                    name: "custom".into(),
                    msg: "missing expressions".into(),
                })?;
                let exprs: Vec<&str> = p
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                Self::custom(&exprs)
            }
            "scale" => {
                let p = params.unwrap_or("power");
                let scale = AsymptoticScale::from_descriptor(p)?;
                scale_to_weights(&scale, 1, 16)
            }
            other => Err(WeightsError::UnknownName(other.to_string())),
        }
    }
}

fn parse_range(p: &str) -> Option<(u32, u32)> {
    let (a, b) = p.split_once("..")?;
    let lo = a.trim().parse().ok()?;
    let hi = b.trim().trim_start_matches('=').parse().ok()?;
    (lo <= hi).then_some((lo, hi))
}

fn infer_direction(members: &[(u32, WeightSeq)]) -> Option<Direction> {
    let mut le = true;
    let mut ge = true;
    for pair in members.windows(2) {
        for &n in DIRECTION_PROBES.iter() {
            let (x, y) = (pair[0].1.eval(n), pair[1].1.eval(n));
            let tol = 1e-12 * x.abs().max(y.abs());
            le &= y <= x + tol;
            ge &= y + tol >= x;
        }
    }
    match (le, ge) {
        (true, _) => Some(Direction::CaseII),
        (false, true) => Some(Direction::CaseI),
        _ => None,
    }
}

/// A scale `m ↦ a_m` with `a_{-m} = 1/a_m`.
#[derive(Clone)]
pub struct AsymptoticScale {
    pub name: String,
    generator: Arc<dyn Fn(i32) -> Result<GrowthExpr, AsymptoticsError> + Send + Sync>,
}

impl fmt::Debug for AsymptoticScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AsymptoticScale({})", self.name)
    }
}

impl AsymptoticScale {
    /// A scale from its positive-index members; `a_0 = 1` and negative indices
    /// are reciprocals.
    pub fn new(
        name: impl Into<String>,
        positive: impl Fn(u32) -> Result<GrowthExpr, AsymptoticsError> + Send + Sync + 'static,
    ) -> Self {
        let generator = move |m: i32| -> Result<GrowthExpr, AsymptoticsError> {
            match m {
                0 => Ok(GrowthExpr::one()),
                m if m > 0 => positive(m as u32),
                m => positive((-m) as u32)?.pow(-1.0),
            }
        };
        AsymptoticScale {
            name: name.into(),
            generator: Arc::new(generator),
        }
    }

    /// A scale given directly on all integers, with no reciprocal built in.
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(i32) -> Result<GrowthExpr, AsymptoticsError> + Send + Sync + 'static,
    ) -> Self {
        AsymptoticScale {
            name: name.into(),
            generator: Arc::new(f),
        }
    }

    pub fn member(&self, m: i32) -> Result<GrowthExpr, AsymptoticsError> {
        (self.generator)(m)
    }

    /// `a_m = n^{-m}`.
    pub fn power() -> Self {
        Self::new("power", |m| Ok(GrowthExpr::n_pow(1.0, -(m as f64))))
    }

    /// `a_m = exp(-m n)`.
    pub fn exponential() -> Self {
        Self::new("exp", |m| format!("exp(-{}*n)", m).parse())
    }

    /// `a_m = 2^{-m}`, constant in `n`: fails the first axiom.
    pub fn geometric() -> Self {
        Self::new("geometric", |m| {
            Ok(GrowthExpr::constant(2f64.powi(-(m as i32))))
        })
    }

    /// Template with `{m}` standing for the positive index, e.g. `exp(-{m}*n^0.5)`.
    pub fn template(t: &str) -> Result<Self, WeightsError> {
        let tpl = t.to_string();
        tpl.replace("{m}", "1").parse::<GrowthExpr>()?;
        Ok(Self::new(format!("template {}", t), move |m| {
            tpl.replace("{m}", &m.to_string()).parse()
        }))
    }

    pub fn from_descriptor(d: &str) -> Result<Self, WeightsError> {
        match d {
            "power" => Ok(Self::power()),
            "exp" | "exponential" => Ok(Self::exponential()),
            "geometric" => Ok(Self::geometric()),
            t if t.contains("{m}") => Self::template(t),
            other => Err(WeightsError::UnknownName(format!("scale {}", other))),
        }
    }
}

/// `r^m = 1/|log a_m|`, symbolic when `log a_m` is a single atom, otherwise
/// evaluated from `a_m` itself. The direction is inferred from the members.
pub fn scale_to_weights(
    a: &AsymptoticScale,
    lo: u32,
    hi: u32,
) -> Result<WeightFamily, WeightsError> {
    let mut members = Vec::new();
    for m in lo.max(1)..=hi {
        let am = a.member(m as i32)?;
        if am.is_zero() {
            return Err(WeightsError::ZeroLog { m: m as i32 });
        }
        let l = am.log_expr()?;
        if l.is_zero() {
            return Err(WeightsError::ZeroLog { m: m as i32 });
        }
        let sign = l.divergence_sign();
        if sign == 0 {
            return Err(WeightsError::NotDecreasing(format!(
                "1/|log a_{}| with a_{} = {}",
                m, m, am
            )));
        }
        let w = match (am.single_term(), l.terms()) {
            (Some(_), [(atom, c)]) => {
                let inv = atom_expr(*atom, c.abs())?.pow(-1.0)?;
                WeightSeq {
                    description: format!("1/|log a_{}| = {}", m, inv),
                    kind: WeightKind::Symbolic(inv),
                }
            }
            _ => {
                let am2 = am.clone();
                WeightSeq::sampled(format!("1/|log({})|", am), move |n| {
                    1.0 / am2.ln_eval(n as f64).abs()
                })
            }
        };
        members.push((m, w));
    }
    let direction = if members.len() == 1 {
        Direction::Single
    } else {
        infer_direction(&members).ok_or_else(|| WeightsError::BadParams {
            name: a.name.clone(),
            msg: "translated weights are not monotone in m".into(),
        })?
    };
    WeightFamily::new(format!("scale:{}", a.name), members, direction)
}

/// Per-axiom outcome of [`verify_scale_axioms`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleReport {
    /// `(m, a_{m+1} ≪ a_m)`
    pub decreasing: Vec<(i32, bool)>,
    /// `(m, a_{-m} = 1/a_m)`
    pub reciprocal: Vec<(i32, bool)>,
    /// `(m, smallest M ≤ search bound with a_M ≪ a_m²)`; `None` is inconclusive.
    pub square: Vec<(i32, Option<i32>)>,
    pub search_bound: i32,
}

impl ScaleReport {
    pub fn all_pass(&self) -> bool {
        self.decreasing.iter().all(|x| x.1)
            && self.reciprocal.iter().all(|x| x.1)
            && self.square.iter().all(|x| x.1.is_some())
    }
}

impl fmt::Display for ScaleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((m, d), (_, r)) in self.decreasing.iter().zip(&self.reciprocal) {
            writeln!(
                f,
                "m={}: a_(m+1) << a_m: {}; a_(-m) = 1/a_m: {}",
                m,
                pass(*d),
                pass(*r)
            )?;
        }
        for (m, w) in &self.square {
            match w {
                Some(big) => writeln!(f, "m={}: a_M << a_m^2 with M = {}", m, big)?,
                None => writeln!(
                    f,
                    "m={}: no M <= {} with a_M << a_m^2 (inconclusive)",
                    m, self.search_bound
                )?,
            }
        }
        write!(
            f,
            "axioms: {}",
            if self.all_pass() {
                "all pass"
            } else {
                "failures present"
            }
        )
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// Checks the three scale axioms on `probe`, searching witnesses `M` up to
/// `search_bound`.
pub fn verify_scale_axioms(
    a: &AsymptoticScale,
    probe: &[i32],
    search_bound: i32,
) -> Result<ScaleReport, WeightsError> {
    let mut rep = ScaleReport {
        decreasing: vec![],
        reciprocal: vec![],
        square: vec![],
        search_bound,
    };
    for &m in probe {
        let am = a.member(m)?;
        let next = a.member(m + 1)?;
        rep.decreasing
            .push((m, next.compare(&am)? == Dominance::Less));
        let inv = a.member(-m)?;
        let recip_ok = !am.is_zero() && am.pow(-1.0).map(|x| x == inv).unwrap_or(false);
        rep.reciprocal.push((m, recip_ok));
        let sq = am.pow(2.0)?;
        let mut found = None;
        for big in (m + 1).max(1)..=search_bound {
            if a.member(big)?.compare(&sq)? == Dominance::Less {
                found = Some(big);
                break;
            }
        }
        rep.square.push((m, found));
    }
    Ok(rep)
}
