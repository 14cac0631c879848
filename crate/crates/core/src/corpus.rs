//! Seeded random corpora: growth expressions with their generating
//! parameters, and smooth-function sequences for the temperate checks.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::GrowthExpr;
use crate::genfun::{parse_fun, Fun};
use crate::seqspaces::SeqRep;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

const COEFFS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];
/// Exponential atoms `exp(s · n^d · (log n)^e)`: growing in `n`, or a pure
/// power of `log n` above one.
const EXP_SHAPES: [(f64, f64); 5] = [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 2.0), (0.0, 3.0)];

/// `coeff · n^a · (log n)^b · exp(s · n^d · (log n)^e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSpec {
    pub coeff: f64,
    pub a: f64,
    pub b: f64,
    pub exp: Option<(f64, f64, f64)>,
}

impl TermSpec {
    pub fn text(&self) -> String {
        let mut parts = vec![format!("{}", self.coeff)];
        if self.a != 0.0 {
            parts.push(format!("n^{}", exp_text(self.a)));
        }
        if self.b != 0.0 {
            parts.push(format!("log(n)^{}", exp_text(self.b)));
        }
        if let Some((s, d, e)) = self.exp {
            let mut inner = vec![format!("{}", s)];
            if d != 0.0 {
                inner.push(format!("n^{}", exp_text(d)));
            }
            if e != 0.0 {
                inner.push(format!("log(n)^{}", exp_text(e)));
            }
            parts.push(format!("exp({})", inner.join("*")));
        }
        parts.join("*")
    }

    /// `ln |term|` at `n = e^L`, from the parameters alone.
    pub fn ln_at(&self, big_l: f64) -> f64 {
        let mut v = self.coeff.ln() + self.a * big_l + self.b * big_l.ln();
        if let Some((s, d, e)) = self.exp {
            v += s * (d * big_l).exp() * big_l.powf(e);
        }
        v
    }
}

fn exp_text(v: f64) -> String {
    if v < 0.0 {
        format!("({})", v)
    } else {
        format!("{}", v)
    }
}

/// A sum of terms, or a parity-modulated pair of sums.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprSpec {
    pub even: Vec<TermSpec>,
    pub odd: Option<Vec<TermSpec>>,
}

fn sum_text(terms: &[TermSpec]) -> String {
    terms
        .iter()
        .map(TermSpec::text)
        .collect::<Vec<_>>()
        .join(" + ")
}

impl ExprSpec {
    pub fn text(&self) -> String {
        match &self.odd {
            None => sum_text(&self.even),
            Some(o) => format!("alt({}, {})", sum_text(&self.even), sum_text(o)),
        }
    }

    pub fn expr(&self) -> GrowthExpr {
        crate::asymptotics::parse(&self.text()).expect("corpus expressions are in the grammar")
    }

    pub fn seq(&self) -> SeqRep {
        SeqRep::symbolic(self.expr())
    }

    /// The branches as term lists.
    pub fn branches(&self) -> Vec<&[TermSpec]> {
        match &self.odd {
            None => vec![&self.even],
            Some(o) => vec![&self.even, o],
        }
    }
}

/// A seeded generator.
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.rng.random_range(0..xs.len())]
    }

    /// Exponents `a ∈ [-8, 8]` in halves and `b ∈ [-3, 3]`; an exponential
    /// factor is attached with probability 0.3.
    pub fn term(&mut self) -> TermSpec {
        let coeff = self.pick(&COEFFS);
        let a = self.rng.random_range(-16i32..=16) as f64 / 2.0;
        let b = self.rng.random_range(-3i32..=3) as f64;
        let exp = if self.rng.random_bool(0.3) {
            let (d, e) = self.pick(&EXP_SHAPES);
            let s = self.pick(&COEFFS) * if self.rng.random_bool(0.5) { 1.0 } else { -1.0 };
            Some((s, d, e))
        } else {
            None
        };
        TermSpec { coeff, a, b, exp }
    }

    fn terms(&mut self) -> Vec<TermSpec> {
        let k = self.rng.random_range(1..=3);
        (0..k).map(|_| self.term()).collect()
    }

    /// A random expression, parity-modulated with probability 0.15.
    pub fn expr_spec(&mut self) -> ExprSpec {
        let even = self.terms();
        let odd = self.rng.random_bool(0.15).then(|| self.terms());
        ExprSpec { even, odd }
    }

    pub fn exprs(&mut self, count: usize) -> Vec<ExprSpec> {
        (0..count).map(|_| self.expr_spec()).collect()
    }

    /// An unmodulated expression.
    pub fn plain_expr(&mut self) -> ExprSpec {
        ExprSpec {
            even: self.terms(),
            odd: None,
        }
    }

    /// A single term with a decaying exponential factor, hence negligible
    /// on every polynomial scale.
    pub fn negligible_expr(&mut self) -> ExprSpec {
        let mut t = self.term();
        let (d, e) = self.pick(&EXP_SHAPES);
        t.exp = Some((-self.pick(&COEFFS), d, e));
        ExprSpec {
            even: vec![t],
            odd: None,
        }
    }

    /// A moderate smooth-function sequence: a base function, possibly scaled
    /// by `n^a` or multiplied by a second base.
    pub fn function(&mut self) -> Fun {
        let text = self.function_text();
        parse_fun(&text).expect("corpus functions parse")
    }

    pub fn function_text(&mut self) -> String {
        let base = self.base();
        match self.rng.random_range(0..3) {
            0 => base,
            1 => format!(
                "[n^{}]*{}",
                exp_text(self.rng.random_range(-2i32..=2) as f64 / 2.0),
                base
            ),
            _ => {
                let other = self.base();
                format!("{}*{}", base, other)
            }
        }
    }

    fn base(&mut self) -> String {
        match self.rng.random_range(0..6) {
            0 => "sin".into(),
            1 => "cos".into(),
            2 => "delta".into(),
            3 => format!(
                "bump({}, {})",
                self.rng.random_range(-4i32..=4) as f64 / 4.0,
                self.pick(&[0.5, 1.0, 1.5])
            ),
            4 => format!(
                "poly({}, {}, {})",
                self.pick(&COEFFS),
                self.pick(&COEFFS),
                self.pick(&COEFFS)
            ),
            _ => "phi".into(),
        }
    }

    /// A negligible function sequence: a base damped by `e^{-cn}` or
    /// `e^{-c (log n)^2}`.
    pub fn negligible_function(&mut self) -> Fun {
        let text = self.negligible_function_text();
        parse_fun(&text).expect("corpus functions parse")
    }

    pub fn negligible_function_text(&mut self) -> String {
        let c = self.pick(&COEFFS);
        let damp = if self.rng.random_bool(0.5) {
            format!("exp(-{}*n)", c)
        } else {
            format!("exp(-{}*log(n)^2)", c)
        };
        format!("[{}]*{}", damp, self.base())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_parseable() {
        let a = Corpus::new(7).exprs(50);
        let b = Corpus::new(7).exprs(50);
        assert_eq!(a, b);
        for e in &a {
            let g = e.expr();
            assert_eq!(g.is_modulated(), e.odd.is_some(), "{}", e.text());
        }
        let mut c = Corpus::new(3);
        for _ in 0..20 {
            c.function();
            c.negligible_function();
        }
    }

    #[test]
    fn parameter_evaluation_matches_the_expression() {
        let mut c = Corpus::new(11);
        for _ in 0..100 {
            let s = c.plain_expr();
            let n: f64 = 50.0;
            let want = crate::asymptotics::parse(&s.text()).unwrap().ln_eval(n);
            let parts: Vec<f64> = s.even.iter().map(|t| t.ln_at(n.ln())).collect();
            let m = parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let got = m + parts.iter().map(|p| (p - m).exp()).sum::<f64>().ln();
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "{}: {} vs {}",
                s.text(),
                got,
                want
            );
        }
    }
}
