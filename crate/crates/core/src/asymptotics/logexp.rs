//! Signed combinations of log-scale atoms and the generalized monomials they
//! exponentiate to.

use std::cmp::Ordering;
use std::fmt;

/// Exponents closer to zero than this are treated as exactly zero.
pub(crate) const SNAP: f64 = 1e-12;

pub(crate) fn snap(x: f64) -> f64 {
    if x.abs() < SNAP {
        0.0
    } else {
        x
    }
}

/// Cancellation-aware sum: the result is zero when it is lost in rounding.
fn merge_coeff(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.abs() <= 1e-12 * a.abs().max(b.abs()) {
        0.0
    } else {
        s
    }
}

/// A basis function of the log scale.
///
/// `Power { d, e }` is `n^d (log n)^e`, so `log n` itself is `Power { d: 0, e: 1 }`.
/// `Iter(k)` is the `k`-fold iterated logarithm, `k >= 2`.
#[derive(Clone, Copy, Debug)]
pub enum LogAtom {
    Const,
    Iter(u32),
    Power { d: f64, e: f64 },
}

impl LogAtom {
    pub const LOG: LogAtom = LogAtom::Power { d: 0.0, e: 1.0 };
    pub const LOGLOG: LogAtom = LogAtom::Iter(2);
    pub const LOGLOGLOG: LogAtom = LogAtom::Iter(3);

    pub fn power(d: f64, e: f64) -> LogAtom {
        LogAtom::Power {
            d: snap(d),
            e: snap(e),
        }
    }

    /// Growth order: every `Power` atom with `d > 0` or `e > 0` dominates all
    /// iterated logs, which dominate the constant.
    pub fn growth_cmp(&self, other: &LogAtom) -> Ordering {
        use LogAtom::*;
        match (self, other) {
            (Const, Const) => Ordering::Equal,
            (Const, _) => Ordering::Less,
            (_, Const) => Ordering::Greater,
            (Iter(a), Iter(b)) => b.cmp(a),
            (Iter(_), Power { .. }) => Ordering::Less,
            (Power { .. }, Iter(_)) => Ordering::Greater,
            (Power { d: d1, e: e1 }, Power { d: d2, e: e2 }) => {
                d1.total_cmp(d2).then_with(|| e1.total_cmp(e2))
            }
        }
    }

    /// Value of the atom at `n`; NaN where an iterated log is undefined.
    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            LogAtom::Const => 1.0,
            LogAtom::Iter(k) => {
                let mut v = n;
                for _ in 0..k {
                    v = v.ln();
                }
                v
            }
            LogAtom::Power { d, e } => {
                let mut v = 1.0;
                if d != 0.0 {
                    v *= n.powf(d);
                }
                if e != 0.0 {
                    v *= n.ln().powf(e);
                }
                v
            }
        }
    }

    /// The log expansion of `ln(atom)`, which is what the atom contributes
    /// when it is used as a multiplicative factor.
    pub(crate) fn ln_of(&self) -> LogExpansion {
        match *self {
            LogAtom::Const => LogExpansion::zero(),
            LogAtom::Iter(k) => LogExpansion::atom(LogAtom::Iter(k + 1), 1.0),
            LogAtom::Power { d, e } => {
                LogExpansion::from_pairs(vec![(LogAtom::LOG, d), (LogAtom::Iter(2), e)])
            }
        }
    }
}

impl PartialEq for LogAtom {
    fn eq(&self, other: &Self) -> bool {
        self.growth_cmp(other) == Ordering::Equal
    }
}

impl fmt::Display for LogAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LogAtom::Const => write!(f, "1"),
            LogAtom::Iter(2) => write!(f, "loglog(n)"),
            LogAtom::Iter(3) => write!(f, "logloglog(n)"),
            LogAtom::Iter(k) => write!(f, "log^[{}](n)", k),
            LogAtom::Power { d, e } => {
                let mut parts = Vec::new();
                if d != 0.0 {
                    parts.push(super::format::power_str("n", d));
                }
                if e != 0.0 {
                    parts.push(super::format::power_str("log(n)", e));
                }
                if parts.is_empty() {
                    parts.push("1".into());
                }
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// A finite signed combination `Σ c_i · atom_i`, kept sorted by descending
/// growth with merged atoms and no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogExpansion {
    terms: Vec<(LogAtom, f64)>,
}

impl LogExpansion {
    pub fn zero() -> Self {
        LogExpansion { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::atom(LogAtom::Const, c)
    }

    pub fn atom(a: LogAtom, c: f64) -> Self {
        Self::from_pairs(vec![(a, c)])
    }

    pub fn from_pairs(mut pairs: Vec<(LogAtom, f64)>) -> Self {
        for (a, _) in pairs.iter_mut() {
            if let LogAtom::Power { d, e } = *a {
                *a = LogAtom::power(d, e);
            }
        }
        pairs.sort_by(|x, y| y.0.growth_cmp(&x.0));
        let mut terms: Vec<(LogAtom, f64)> = Vec::with_capacity(pairs.len());
        for (a, c) in pairs {
            match terms.last_mut() {
                Some(last) if last.0 == a => last.1 = merge_coeff(last.1, c),
                _ => terms.push((a, c)),
            }
        }
        terms.retain(|(_, c)| *c != 0.0);
        LogExpansion { terms }
    }

    pub fn terms(&self) -> &[(LogAtom, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the constant atom.
    pub fn constant_part(&self) -> f64 {
        self.terms
            .iter()
            .find(|(a, _)| matches!(a, LogAtom::Const))
            .map_or(0.0, |t| t.1)
    }

    /// Same expansion with the constant atom removed.
    pub fn without_constant(&self) -> LogExpansion {
        LogExpansion {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(a, _)| !matches!(a, LogAtom::Const))
                .collect(),
        }
    }

    /// Fastest-growing non-constant atom, with its coefficient.
    pub fn leading(&self) -> Option<(LogAtom, f64)> {
        self.terms
            .first()
            .copied()
            .filter(|(a, _)| !matches!(a, LogAtom::Const))
    }

    pub fn add(&self, other: &LogExpansion) -> LogExpansion {
        let mut v = self.terms.clone();
        v.extend_from_slice(&other.terms);
        Self::from_pairs(v)
    }

    pub fn scale(&self, s: f64) -> LogExpansion {
        Self::from_pairs(self.terms.iter().map(|&(a, c)| (a, c * s)).collect())
    }

    pub fn neg(&self) -> LogExpansion {
        self.scale(-1.0)
    }

    pub fn sub(&self, other: &LogExpansion) -> LogExpansion {
        self.add(&other.neg())
    }

    /// Sign of the leading non-constant coefficient: +1 means the expansion
    /// tends to +∞, -1 to -∞, 0 means it converges to its constant part.
    pub fn divergence_sign(&self) -> i8 {
        match self.leading() {
            Some((_, c)) if c > 0.0 => 1,
            Some(_) => -1,
            None => 0,
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.terms.iter().map(|(a, c)| c * a.eval(n)).sum()
    }
}

impl fmt::Display for LogExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            let body = if matches!(a, LogAtom::Const) {
                format!("{}", c.abs())
            } else if c.abs() == 1.0 {
                a.to_string()
            } else {
                format!("{}*{}", c.abs(), a)
            };
            match (i, *c < 0.0) {
                (0, true) => write!(f, "-{}", body)?,
                (0, false) => write!(f, "{}", body)?,
                (_, true) => write!(f, " - {}", body)?,
                (_, false) => write!(f, " + {}", body)?,
            }
        }
        Ok(())
    }
}

/// Ordering verdict between two eventually positive sequences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dominance {
    /// `a(n)/b(n) → 0`
    Less,
    /// `a(n)/b(n) → ∞`
    Greater,
    /// `a(n)/b(n) → ρ` with `0 < ρ < ∞`
    SameOrder(f64),
}

/// `coeff · exp(lx)` where `lx` has no constant atom. The coefficient may be
/// negative; this is the working representation for signed sums and products.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Mono {
    pub coeff: f64,
    pub lx: LogExpansion,
}

impl Mono {
    pub fn new(coeff: f64, lx: LogExpansion) -> Mono {
        let c = lx.constant_part();
        let lx = lx.without_constant();
        Mono {
            coeff: coeff * c.exp(),
            lx,
        }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono {
            coeff: self.coeff * o.coeff,
            lx: self.lx.add(&o.lx),
        }
    }

    /// Growth comparison of magnitudes, ignoring coefficients unless the
    /// signatures coincide.
    pub fn signature_cmp(&self, o: &Mono) -> Ordering {
        match self.lx.sub(&o.lx).divergence_sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn dominance(&self, o: &Mono) -> Dominance {
        match self.signature_cmp(o) {
            Ordering::Greater => Dominance::Greater,
            Ordering::Less => Dominance::Less,
            Ordering::Equal => Dominance::SameOrder((self.coeff / o.coeff).abs()),
        }
    }

    /// Natural log of the magnitude at `n`.
    pub fn ln_abs(&self, n: f64) -> f64 {
        self.coeff.abs().ln() + self.lx.eval(n)
    }
}

/// Sorts descending by growth, merges identical signatures and drops
/// cancelled terms.
pub(crate) fn normalize_monos(mut v: Vec<Mono>) -> Vec<Mono> {
    v.sort_by(|a, b| b.signature_cmp(a));
    let mut out: Vec<Mono> = Vec::with_capacity(v.len());
    for m in v {
        match out.last_mut() {
            Some(last) if last.lx == m.lx => last.coeff = merge_coeff(last.coeff, m.coeff),
            _ => out.push(m),
        }
    }
    out.retain(|m| m.coeff != 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_growth_order() {
        let n = LogAtom::power(1.0, 0.0);
        let sqrt_log = LogAtom::power(0.0, 0.5);
        assert_eq!(n.growth_cmp(&LogAtom::LOG), Ordering::Greater);
        assert_eq!(LogAtom::LOG.growth_cmp(&sqrt_log), Ordering::Greater);
        assert_eq!(sqrt_log.growth_cmp(&LogAtom::LOGLOG), Ordering::Greater);
        assert_eq!(
            LogAtom::LOGLOG.growth_cmp(&LogAtom::LOGLOGLOG),
            Ordering::Greater
        );
        assert_eq!(
            LogAtom::LOGLOGLOG.growth_cmp(&LogAtom::Const),
            Ordering::Greater
        );
        assert_eq!(
            LogAtom::power(1.0, -3.0).growth_cmp(&LogAtom::power(0.5, 9.0)),
            Ordering::Greater
        );
    }

    #[test]
    fn expansion_merges_and_cancels() {
        let a = LogExpansion::from_pairs(vec![
            (LogAtom::LOG, 0.1),
            (LogAtom::LOG, 0.2),
            (LogAtom::Const, 1.0),
        ]);
        let b = LogExpansion::from_pairs(vec![(LogAtom::LOG, 0.3)]);
        let d = a.sub(&b);
        assert_eq!(d.terms(), &[(LogAtom::Const, 1.0)]);
        assert_eq!(d.divergence_sign(), 0);
    }

    #[test]
    fn mono_dominance() {
        let n2 = Mono::new(3.0, LogExpansion::atom(LogAtom::LOG, 2.0));
        let n2log = Mono::new(
            1.0,
            LogExpansion::from_pairs(vec![(LogAtom::LOG, 2.0), (LogAtom::LOGLOG, 1.0)]),
        );
        assert_eq!(n2log.dominance(&n2), Dominance::Greater);
        assert_eq!(n2.dominance(&n2), Dominance::SameOrder(1.0));
    }

    #[test]
    fn iterated_log_eval() {
        let n = 1e6f64;
        assert!((LogAtom::LOGLOG.eval(n) - n.ln().ln()).abs() < 1e-15);
        assert!(
            (LogAtom::power(2.0, 1.0).eval(n) - n * n * n.ln()).abs() / (n * n * n.ln()) < 1e-15
        );
    }
}
