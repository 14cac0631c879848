use std::fmt;

use super::expr::{dominant_limit, GrowthExpr};
use super::format::term_str_with;
use super::logexp::{normalize_monos, Mono};
use super::term::GrowthTerm;
use super::AsymptoticsError;
use crate::values::ExtReal;

/// A real sequence given as a signed sum of growth terms, with optional parity
/// modulation. Closed under `+`, `-` and `*`, which the nonnegative
/// `GrowthExpr` is not.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedExpr {
    even: Vec<Mono>,
    odd: Vec<Mono>,
}

impl SignedExpr {
    pub fn zero() -> Self {
        SignedExpr {
            even: Vec::new(),
            odd: Vec::new(),
        }
    }

    pub fn from_growth(g: &GrowthExpr) -> Self {
        let (e, o) = g.branches();
        SignedExpr {
            even: e.monos(),
            odd: o.monos(),
        }
    }

    fn from_parts(even: Vec<Mono>, odd: Vec<Mono>) -> Self {
        SignedExpr {
            even: normalize_monos(even),
            odd: normalize_monos(odd),
        }
    }

    pub fn is_modulated(&self) -> bool {
        self.even != self.odd
    }

    pub fn is_identically_zero(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn add(&self, o: &SignedExpr) -> SignedExpr {
        let cat = |a: &[Mono], b: &[Mono]| a.iter().chain(b.iter()).cloned().collect::<Vec<_>>();
        Self::from_parts(cat(&self.even, &o.even), cat(&self.odd, &o.odd))
    }

    pub fn neg(&self) -> SignedExpr {
        self.scale(-1.0)
    }

    pub fn sub(&self, o: &SignedExpr) -> SignedExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: f64) -> SignedExpr {
        let sc = |v: &[Mono]| {
            v.iter()
                .map(|m| Mono {
                    coeff: m.coeff * c,
                    lx: m.lx.clone(),
                })
                .collect::<Vec<_>>()
        };
        Self::from_parts(sc(&self.even), sc(&self.odd))
    }

    pub fn mul(&self, o: &SignedExpr) -> SignedExpr {
        let prod = |a: &[Mono], b: &[Mono]| {
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x.mul(y)))
                .collect::<Vec<_>>()
        };
        Self::from_parts(prod(&self.even, &o.even), prod(&self.odd, &o.odd))
    }

    /// Multiplies by a nonnegative expression.
    pub fn mul_growth(&self, g: &GrowthExpr) -> SignedExpr {
        self.mul(&SignedExpr::from_growth(g))
    }

    /// `|self|` as a growth expression. The boolean is true when the result
    /// is pointwise exact for large `n`; otherwise it is the magnitude of the
    /// dominant term, which is asymptotically equivalent.
    pub fn abs(&self) -> (GrowthExpr, bool) {
        let branch = |v: &[Mono]| -> (GrowthExpr, bool) {
            if v.is_empty() {
                return (GrowthExpr::zero(), true);
            }
            let positive = v.iter().all(|m| m.coeff > 0.0);
            let negative = v.iter().all(|m| m.coeff < 0.0);
            let pick: Vec<GrowthTerm> = if positive || negative {
                v.iter().map(term_abs).collect()
            } else {
                vec![term_abs(&v[0])]
            };
            (GrowthExpr::from_terms(pick), positive || negative)
        };
        let (e, ex_e) = branch(&self.even);
        let (o, ex_o) = branch(&self.odd);
        (GrowthExpr::alt(e, o), ex_e && ex_o)
    }

    /// Limits along the even and odd indices.
    pub fn limits(&self) -> (ExtReal, ExtReal) {
        (dominant_limit(&self.even), dominant_limit(&self.odd))
    }

    fn branch(&self, n: f64) -> &[Mono] {
        if (n.round() as u64).is_multiple_of(2) {
            &self.even
        } else {
            &self.odd
        }
    }

    /// Value at `n`, summed in a scaled form to avoid overflow in
    /// intermediate terms.
    pub fn eval(&self, n: f64) -> f64 {
        let (ln_mag, sign) = self.ln_abs_sign(n);
        sign * ln_mag.exp()
    }

    /// `(ln |value|, sign)` at `n`.
    pub fn ln_abs_sign(&self, n: f64) -> (f64, f64) {
        let v = self.branch(n);
        let lns: Vec<f64> = v.iter().map(|m| m.ln_abs(n)).collect();
        let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !m.is_finite() {
            return (m, 1.0);
        }
        let s: f64 = v
            .iter()
            .zip(&lns)
            .map(|(t, l)| t.coeff.signum() * (l - m).exp())
            .sum();
        if s == 0.0 {
            (f64::NEG_INFINITY, 1.0)
        } else {
            (m + s.abs().ln(), s.signum())
        }
    }

    fn fmt_branch(v: &[Mono]) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, m) in v.iter().enumerate() {
            let t = GrowthTerm::signed_from_mono(m).expect("terms stay in the fragment");
            let body = term_str_with(&t, m.coeff.abs(), true);
            match (i, m.coeff < 0.0) {
                (0, true) => s.push_str(&format!("-{}", body)),
                (0, false) => s.push_str(&body),
                (_, true) => s.push_str(&format!(" - {}", body)),
                (_, false) => s.push_str(&format!(" + {}", body)),
            }
        }
        s
    }
}

fn term_abs(m: &Mono) -> GrowthTerm {
    GrowthTerm::from_mono(&Mono {
        coeff: m.coeff.abs(),
        lx: m.lx.clone(),
    })
    .expect("terms stay in the fragment")
}

impl fmt::Display for SignedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_modulated() {
            write!(
                f,
                "alt({}, {})",
                Self::fmt_branch(&self.even),
                Self::fmt_branch(&self.odd)
            )
        } else {
            write!(f, "{}", Self::fmt_branch(&self.even))
        }
    }
}

impl std::str::FromStr for SignedExpr {
    type Err = AsymptoticsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_signed(s)
    }
}
