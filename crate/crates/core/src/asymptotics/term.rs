use super::logexp::{snap, LogAtom, LogExpansion, Mono};
use super::AsymptoticsError;

/// `c · n^d · (log n)^e` inside an exponential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpAtom {
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl ExpAtom {
    /// Atoms must grow: `d > 0`, or `d = 0` with a positive power of `log n`.
    /// `c·log n` itself is a power of `n` and is folded there by the caller.
    pub fn is_admissible(&self) -> bool {
        self.c.is_finite() && (self.d > 0.0 || (self.d == 0.0 && self.e > 0.0))
    }
}

/// One product `coeff · n^pow_n · (log n)^pow_log · (loglog n)^pow_loglog · exp(Σ c n^d (log n)^e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTerm {
    coeff: f64,
    pow_n: f64,
    pow_log: f64,
    pow_loglog: f64,
    exp_part: Vec<ExpAtom>,
}

impl GrowthTerm {
    pub fn new(
        coeff: f64,
        pow_n: f64,
        pow_log: f64,
        pow_loglog: f64,
        exp_part: Vec<ExpAtom>,
    ) -> Result<Self, AsymptoticsError> {
        if !(coeff > 0.0 && coeff.is_finite()) {
            return Err(AsymptoticsError::NotRepresentable(format!(
                "term coefficient must be positive and finite, got {}",
                coeff
            )));
        }
        for a in &exp_part {
            if !a.is_admissible() {
                return Err(AsymptoticsError::NotRepresentable(format!(
                    "exp atom {}*n^{}*log(n)^{} does not grow",
                    a.c, a.d, a.e
                )));
            }
        }
        let mut lx = LogExpansion::from_pairs(vec![
            (LogAtom::LOG, pow_n),
            (LogAtom::LOGLOG, pow_log),
            (LogAtom::LOGLOGLOG, pow_loglog),
        ]);
        let exp_lx = LogExpansion::from_pairs(
            exp_part
                .iter()
                .map(|a| (LogAtom::power(a.d, a.e), a.c))
                .collect(),
        );
        lx = lx.add(&exp_lx);
        Self::from_mono(&Mono::new(coeff, lx))
    }

    pub fn monomial(coeff: f64, pow_n: f64) -> Self {
        Self::new(coeff, pow_n, 0.0, 0.0, Vec::new()).expect("valid monomial")
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }
    pub fn pow_n(&self) -> f64 {
        self.pow_n
    }
    pub fn pow_log(&self) -> f64 {
        self.pow_log
    }
    pub fn pow_loglog(&self) -> f64 {
        self.pow_loglog
    }
    pub fn exp_part(&self) -> &[ExpAtom] {
        &self.exp_part
    }

    pub(crate) fn to_mono(&self) -> Mono {
        Mono {
            coeff: self.coeff,
            lx: self.signature(),
        }
    }

    /// Builds a term from a positive monomial; iterated logs deeper than
    /// `loglog n` leave the fragment.
    pub(crate) fn from_mono(m: &Mono) -> Result<Self, AsymptoticsError> {
        let mut t = GrowthTerm::signed_from_mono(m)?;
        if !(t.coeff > 0.0) {
            return Err(AsymptoticsError::NotRepresentable(
                "negative coefficient".into(),
            ));
        }
        t.coeff = t.coeff.abs();
        Ok(t)
    }

    /// Like `from_mono` but keeps the sign of the coefficient.
    pub(crate) fn signed_from_mono(m: &Mono) -> Result<Self, AsymptoticsError> {
        let mut t = GrowthTerm {
            coeff: m.coeff,
            pow_n: 0.0,
            pow_log: 0.0,
            pow_loglog: 0.0,
            exp_part: Vec::new(),
        };
        for &(a, c) in m.lx.terms() {
            match a {
                LogAtom::Const => t.coeff *= c.exp(),
                LogAtom::Iter(2) => t.pow_log = c,
                LogAtom::Iter(3) => t.pow_loglog = c,
                LogAtom::Iter(k) => {
                    return Err(AsymptoticsError::NotRepresentable(format!(
                        "{}-fold iterated logarithm",
                        k
                    )))
                }
                LogAtom::Power { d, e } if d == 0.0 && e == 1.0 => t.pow_n = c,
                LogAtom::Power { d, e } => {
                    let atom = ExpAtom { c, d, e };
                    if !atom.is_admissible() {
                        return Err(AsymptoticsError::NotRepresentable(format!("exp of {}", a)));
                    }
                    t.exp_part.push(atom);
                }
            }
        }
        Ok(t)
    }

    /// `ln` of the term without its constant: the part that decides dominance.
    pub fn signature(&self) -> LogExpansion {
        let mut pairs = vec![
            (LogAtom::LOG, self.pow_n),
            (LogAtom::LOGLOG, self.pow_log),
            (LogAtom::LOGLOGLOG, self.pow_loglog),
        ];
        pairs.extend(
            self.exp_part
                .iter()
                .map(|a| (LogAtom::power(a.d, a.e), a.c)),
        );
        LogExpansion::from_pairs(pairs)
    }

    /// Full logarithm `ln coeff + signature`.
    pub fn log_expansion(&self) -> LogExpansion {
        self.signature()
            .add(&LogExpansion::constant(self.coeff.ln()))
    }

    pub fn ln_eval(&self, n: f64) -> f64 {
        self.coeff.ln() + self.signature().eval(n)
    }

    pub fn powf(&self, s: f64) -> Self {
        let m = self.to_mono();
        Self::from_mono(&Mono {
            coeff: m.coeff.powf(s),
            lx: m.lx.scale(snap(s)),
        })
        .expect("powers stay in the fragment")
    }

    pub fn is_constant(&self) -> bool {
        self.signature().is_zero()
    }
}
