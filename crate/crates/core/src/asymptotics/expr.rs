use std::fmt;
use std::str::FromStr;

use super::logexp::{normalize_monos, Dominance, LogAtom, LogExpansion, Mono};
use super::term::GrowthTerm;
use super::AsymptoticsError;
use crate::values::ExtReal;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Zero,
    Sum(Vec<GrowthTerm>),
    /// Even-index and odd-index branches; both are modulation-free.
    Alt(Box<GrowthExpr>, Box<GrowthExpr>),
}

/// A nonnegative sequence in normal form: zero, a sum of terms sorted by
/// descending dominance, or a parity-modulated pair of such sums.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthExpr {
    repr: Repr,
}

/// Result of `limit_of_product`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProductLimit {
    Converges(ExtReal),
    Oscillating { even: ExtReal, odd: ExtReal },
}

impl ProductLimit {
    /// The limsup over both parity branches.
    pub fn upper(&self) -> ExtReal {
        match *self {
            ProductLimit::Converges(v) => v,
            ProductLimit::Oscillating { even, odd } => even.max(odd),
        }
    }
}

impl GrowthExpr {
    pub fn zero() -> Self {
        GrowthExpr { repr: Repr::Zero }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// `c` for `c > 0`, `Zero` for `c = 0`.
    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self::from_term(GrowthTerm::monomial(c, 0.0))
    }

    /// `c · n^a`.
    pub fn n_pow(c: f64, a: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self::from_term(GrowthTerm::monomial(c, a))
    }

    pub fn from_term(t: GrowthTerm) -> Self {
        GrowthExpr {
            repr: Repr::Sum(vec![t]),
        }
    }

    pub fn from_terms(terms: Vec<GrowthTerm>) -> Self {
        let monos = normalize_monos(terms.iter().map(GrowthTerm::to_mono).collect());
        Self::from_positive_monos(monos)
    }

    fn from_positive_monos(monos: Vec<Mono>) -> Self {
        if monos.is_empty() {
            return Self::zero();
        }
        let terms = monos
            .iter()
            .map(|m| GrowthTerm::from_mono(m).expect("positive monomials stay in the fragment"))
            .collect();
        GrowthExpr {
            repr: Repr::Sum(terms),
        }
    }

    /// Parity modulation: `even` on even indices, `odd` on odd ones. Collapses
    /// when the branches coincide.
    pub fn alt(even: GrowthExpr, odd: GrowthExpr) -> Self {
        let (e, _) = even.into_branches();
        let (_, o) = odd.into_branches();
        if e == o {
            e
        } else {
            GrowthExpr {
                repr: Repr::Alt(Box::new(e), Box::new(o)),
            }
        }
    }

    fn into_branches(self) -> (GrowthExpr, GrowthExpr) {
        match self.repr {
            Repr::Alt(e, o) => (*e, *o),
            _ => (self.clone(), self),
        }
    }

    /// Even and odd branches (both equal to `self` when unmodulated).
    pub fn branches(&self) -> (GrowthExpr, GrowthExpr) {
        self.clone().into_branches()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_modulated(&self) -> bool {
        matches!(self.repr, Repr::Alt(..))
    }

    /// Terms of an unmodulated expression, dominant first. Empty for zero.
    pub fn terms(&self) -> Option<&[GrowthTerm]> {
        match &self.repr {
            Repr::Zero => Some(&[]),
            Repr::Sum(t) => Some(t),
            Repr::Alt(..) => None,
        }
    }

    /// The single term of a one-term expression.
    pub fn single_term(&self) -> Option<&GrowthTerm> {
        match self.terms() {
            Some([t]) => Some(t),
            _ => None,
        }
    }

    pub fn dominant_term(&self) -> Option<&GrowthTerm> {
        self.terms().and_then(|t| t.first())
    }

    pub(crate) fn monos(&self) -> Vec<Mono> {
        self.terms()
            .map(|t| t.iter().map(GrowthTerm::to_mono).collect())
            .unwrap_or_default()
    }

    fn map_branches2(
        &self,
        other: &GrowthExpr,
        f: impl Fn(&GrowthExpr, &GrowthExpr) -> Result<GrowthExpr, AsymptoticsError>,
    ) -> Result<GrowthExpr, AsymptoticsError> {
        if self.is_modulated() || other.is_modulated() {
            let (a0, a1) = self.branches();
            let (b0, b1) = other.branches();
            Ok(GrowthExpr::alt(f(&a0, &b0)?, f(&a1, &b1)?))
        } else {
            f(self, other)
        }
    }

    pub fn add(&self, other: &GrowthExpr) -> GrowthExpr {
        self.map_branches2(other, |a, b| {
            let mut v = a.monos();
            v.extend(b.monos());
            Ok(GrowthExpr::from_positive_monos(normalize_monos(v)))
        })
        .expect("addition is total")
    }

    pub fn mul(&self, other: &GrowthExpr) -> GrowthExpr {
        self.map_branches2(other, |a, b| {
            let (ma, mb) = (a.monos(), b.monos());
            let v = ma
                .iter()
                .flat_map(|x| mb.iter().map(move |y| x.mul(y)))
                .collect();
            Ok(GrowthExpr::from_positive_monos(normalize_monos(v)))
        })
        .expect("multiplication is total")
    }

    /// Multiplies by a positive constant.
    pub fn scale(&self, c: f64) -> GrowthExpr {
        self.mul(&GrowthExpr::constant(c))
    }

    /// `self^s`. Multi-term sums accept only non-negative integer powers, which
    /// expand exactly.
    pub fn pow(&self, s: f64) -> Result<GrowthExpr, AsymptoticsError> {
        if self.is_modulated() {
            let (e, o) = self.branches();
            return Ok(GrowthExpr::alt(e.pow(s)?, o.pow(s)?));
        }
        if !s.is_finite() {
            return Err(AsymptoticsError::NotRepresentable(format!("power {}", s)));
        }
        match self.terms().unwrap() {
            [] if s > 0.0 => Ok(GrowthExpr::zero()),
            [] if s == 0.0 => Ok(GrowthExpr::one()),
            [] => Err(AsymptoticsError::NotRepresentable(
                "negative power of zero".into(),
            )),
            [t] => Ok(GrowthExpr::from_term(t.powf(s))),
            _ if s >= 0.0 && s.fract() == 0.0 && s <= 64.0 => {
                let mut acc = GrowthExpr::one();
                for _ in 0..(s as u32) {
                    acc = acc.mul(self);
                }
                Ok(acc)
            }
            _ => Err(AsymptoticsError::NotRepresentable(format!(
                "power {} of a sum of {} terms",
                s,
                self.terms().unwrap().len()
            ))),
        }
    }

    /// Dominance of unmodulated expressions. `Zero` is below every nonzero
    /// expression and same-order (ratio 1) with itself.
    pub fn compare(&self, other: &GrowthExpr) -> Result<Dominance, AsymptoticsError> {
        if self.is_modulated() || other.is_modulated() {
            return Err(AsymptoticsError::Modulated("compare"));
        }
        Ok(match (self.dominant_term(), other.dominant_term()) {
            (None, None) => Dominance::SameOrder(1.0),
            (None, Some(_)) => Dominance::Less,
            (Some(_), None) => Dominance::Greater,
            (Some(a), Some(b)) => a.to_mono().dominance(&b.to_mono()),
        })
    }

    /// `ln` of the expression up to an `o(1)` error: the log of the dominant
    /// term (exact for single-term expressions).
    pub fn log_expr(&self) -> Result<LogExpansion, AsymptoticsError> {
        if self.is_modulated() {
            return Err(AsymptoticsError::Modulated("log_expr"));
        }
        self.dominant_term()
            .map(GrowthTerm::log_expansion)
            .ok_or(AsymptoticsError::LogOfZero)
    }

    /// Natural log of the value at index `n`; `-inf` for zero.
    pub fn ln_eval(&self, n: f64) -> f64 {
        match &self.repr {
            Repr::Zero => f64::NEG_INFINITY,
            Repr::Sum(terms) => log_sum_exp(terms.iter().map(|t| t.ln_eval(n))),
            Repr::Alt(e, o) => {
                if (n.round() as u64).is_multiple_of(2) {
                    e.ln_eval(n)
                } else {
                    o.ln_eval(n)
                }
            }
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.ln_eval(n).exp()
    }

    /// True iff the sequence tends to zero.
    pub fn tends_to_zero(&self) -> bool {
        let (e, o) = self.branches();
        [e, o]
            .iter()
            .all(|b| b.compare(&GrowthExpr::one()).unwrap() == Dominance::Less)
    }

    /// `lim r_n · L(n)` where `L` is a log expansion, computed exactly by
    /// expanding the product into monomials and reading off the dominant one.
    pub fn limit_of_product(&self, l: &LogExpansion) -> ProductLimit {
        if self.is_modulated() {
            let (e, o) = self.branches();
            let (le, lo) = (e.limit_of_product(l).upper(), o.limit_of_product(l).upper());
            return if le == lo {
                ProductLimit::Converges(le)
            } else {
                ProductLimit::Oscillating { even: le, odd: lo }
            };
        }
        let factors: Vec<Mono> = l
            .terms()
            .iter()
            .map(|&(a, c)| Mono {
                coeff: c,
                lx: a.ln_of(),
            })
            .collect();
        let products: Vec<Mono> = self
            .monos()
            .iter()
            .flat_map(|t| factors.iter().map(move |f| t.mul(f)))
            .collect();
        ProductLimit::Converges(dominant_limit(&normalize_monos(products)))
    }
}

/// Limit of a signed normalized monomial sum.
pub(crate) fn dominant_limit(monos: &[Mono]) -> ExtReal {
    match monos.first() {
        None => ExtReal::ZERO,
        Some(m) => match m.lx.divergence_sign() {
            0 => ExtReal::Finite(m.coeff),
            1 if m.coeff > 0.0 => ExtReal::PosInf,
            1 => ExtReal::NegInf,
            _ => ExtReal::ZERO,
        },
    }
}

pub(crate) fn log_sum_exp(it: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `exp(L)` as an expression. Fails when an atom of `L` has no counterpart in
/// the fragment (decaying exponents, iterated logs beyond the third level).
pub fn exp_of_log_expansion(l: &LogExpansion) -> Result<GrowthExpr, AsymptoticsError> {
    let m = Mono::new(1.0, l.clone());
    Ok(GrowthExpr::from_term(GrowthTerm::from_mono(&m)?))
}

/// The single atom `a` with coefficient `c` as an expression `c · a`.
pub fn atom_expr(a: LogAtom, c: f64) -> Result<GrowthExpr, AsymptoticsError> {
    if c <= 0.0 {
        return Err(AsymptoticsError::NotRepresentable(
            "non-positive coefficient".into(),
        ));
    }
    Ok(GrowthExpr::from_term(GrowthTerm::from_mono(&Mono {
        coeff: c,
        lx: a.ln_of(),
    })?))
}

impl fmt::Display for GrowthExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Sum(terms) => {
                let parts: Vec<String> = terms.iter().map(super::format::term_str).collect();
                write!(f, "{}", parts.join(" + "))
            }
            Repr::Alt(e, o) => write!(f, "alt({}, {})", e, o),
        }
    }
}

impl FromStr for GrowthExpr {
    type Err = AsymptoticsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse(s)
    }
}
