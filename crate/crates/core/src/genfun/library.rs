//! Function corpus: elementary smooth functions and combinators, each with
//! analytic derivatives through jets.

use std::sync::{Arc, OnceLock};

use super::jet::Jet;
use super::{Fun, SmoothSeq, DEFAULT_MAX_ORDER};
use crate::asymptotics::GrowthExpr;

fn hull(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
        _ => None,
    }
}

fn meet(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (Some((a0, a1)), Some((b0, b1))) => {
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            // an empty meet is kept as a degenerate interval
            Some(if lo <= hi { (lo, hi) } else { (lo, lo) })
        }
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// `∫_{-1}^{1} exp(-1/(1-t²)) dt`, the normalizing constant of the
/// standard bump.
pub fn bump_mass() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| {
        quadrature::integrate(
            |t: f64| {
                if t.abs() < 1.0 {
                    (-1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            },
            -1.0,
            1.0,
            1e-15,
        )
        .integral
    })
}

struct Const(f64);

impl SmoothSeq for Const {
    fn jet(&self, _: u64, _: f64, order: usize) -> Jet {
        Jet::constant(self.0, order)
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        if self.0 == 0.0 {
            Some((0.0, 0.0))
        } else {
            None
        }
    }
    fn label(&self) -> String {
        crate::asymptotics::format::num(self.0)
    }
}

pub fn constant(c: f64) -> Fun {
    Arc::new(Const(c))
}

pub fn zero() -> Fun {
    constant(0.0)
}

struct Poly(Vec<f64>);

impl SmoothSeq for Poly {
    fn jet(&self, _: u64, x: f64, order: usize) -> Jet {
        // Taylor shift: c_k = Σ_j C(j,k) a_j x^{j-k}
        let deg = self.0.len().saturating_sub(1);
        let c = (0..=order)
            .map(|k| {
                if k > deg {
                    return 0.0;
                }
                let mut binom = 1.0;
                let mut s = 0.0;
                for j in k..=deg {
                    if j > k {
                        binom = binom * j as f64 / (j - k) as f64;
                    }
                    s += binom * self.0[j] * x.powi((j - k) as i32);
                }
                s
            })
            .collect();
        Jet::from_taylor(c)
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        if self.0.iter().all(|a| *a == 0.0) {
            Some((0.0, 0.0))
        } else {
            None
        }
    }
    fn label(&self) -> String {
        let c: Vec<String> = self
            .0
            .iter()
            .map(|v| crate::asymptotics::format::num(*v))
            .collect();
        format!("poly({})", c.join(", "))
    }
}

/// `Σ a_j x^j` with coefficients in increasing degree.
pub fn poly(coeffs: &[f64]) -> Fun {
    Arc::new(Poly(coeffs.to_vec()))
}

struct Trig {
    phase: f64,
    name: &'static str,
}

impl SmoothSeq for Trig {
    fn jet(&self, _: u64, x: f64, order: usize) -> Jet {
        let mut fact = 1.0;
        let c = (0..=order)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                (x + self.phase + k as f64 * std::f64::consts::FRAC_PI_2).sin() / fact
            })
            .collect();
        Jet::from_taylor(c)
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        None
    }
    fn label(&self) -> String {
        self.name.into()
    }
}

pub fn sin() -> Fun {
    Arc::new(Trig {
        phase: 0.0,
        name: "sin",
    })
}

pub fn cos() -> Fun {
    Arc::new(Trig {
        phase: std::f64::consts::FRAC_PI_2,
        name: "cos",
    })
}

/// `φ((x−c)/w)/w` with `φ` the standard bump of unit mass.
struct Bump {
    center: f64,
    width: f64,
}

impl SmoothSeq for Bump {
    fn jet(&self, _: u64, x: f64, order: usize) -> Jet {
        let t0 = (x - self.center) / self.width;
        if t0.abs() >= 1.0 {
            return Jet::zero(order);
        }
        let t = Jet::variable(x, order)
            .add(&Jet::constant(-self.center, order))
            .scale(1.0 / self.width);
        let u = Jet::constant(1.0, order).sub(&t.mul(&t));
        let v = u.recip().expect("inside the support").neg();
        v.exp().scale(1.0 / (bump_mass() * self.width))
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        Some((self.center - self.width, self.center + self.width))
    }
    fn feature_width(&self, _: u64) -> f64 {
        self.width
    }
    fn label(&self) -> String {
        if self.center == 0.0 && self.width == 1.0 {
            "phi".into()
        } else {
            format!(
                "bump({}, {})",
                crate::asymptotics::format::num(self.center),
                crate::asymptotics::format::num(self.width)
            )
        }
    }
}

/// Unit-mass bump supported on `[c − w, c + w]`.
pub fn bump(center: f64, width: f64) -> Fun {
    assert!(width > 0.0, "bump width must be positive");
    Arc::new(Bump { center, width })
}

/// The standard bump `φ(x) = exp(-1/(1-x²))/Z` on `(-1, 1)`.
pub fn standard_bump() -> Fun {
    bump(0.0, 1.0)
}

/// `n^s · φ(n·)` for an `n`-independent profile `φ`.
struct Mollified {
    profile: Fun,
    power: f64,
}

impl SmoothSeq for Mollified {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        let nf = n as f64;
        self.profile
            .jet(n, nf * x, order)
            .chain_linear(nf)
            .scale_ln(self.power * nf.ln(), 1.0)
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        self.profile
            .support(n)
            .map(|(a, b)| (a / n as f64, b / n as f64))
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.profile.feature_width(n) / n as f64
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.support(n)
    }
    fn max_order(&self) -> usize {
        self.profile.max_order()
    }
    fn label(&self) -> String {
        let p = crate::asymptotics::format::num(self.power);
        format!("mollified({}, {})", self.profile.label(), p)
    }
}

pub fn mollified(profile: Fun, power: f64) -> Fun {
    Arc::new(Mollified { profile, power })
}

/// `δ_n = n·φ(n·)`.
pub fn delta() -> Fun {
    mollified(standard_bump(), 1.0)
}

struct Sum(Fun, Fun);

impl SmoothSeq for Sum {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.0.jet(n, x, order).add(&self.1.jet(n, x, order))
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        hull(self.0.support(n), self.1.support(n))
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.0.feature_width(n).min(self.1.feature_width(n))
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        match (self.0.focus(n), self.1.focus(n)) {
            (Some(a), Some(b)) => hull(Some(a), Some(b)),
            (a, b) => a.or(b),
        }
    }
    fn summands(&self) -> Option<(Fun, Fun)> {
        Some((self.0.clone(), self.1.clone()))
    }
    fn max_order(&self) -> usize {
        self.0.max_order().min(self.1.max_order())
    }
    fn label(&self) -> String {
        format!("{} + {}", self.0.label(), self.1.label())
    }
}

pub fn sum(a: Fun, b: Fun) -> Fun {
    Arc::new(Sum(a, b))
}

struct Product(Fun, Fun);

impl SmoothSeq for Product {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.0.jet(n, x, order).mul(&self.1.jet(n, x, order))
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        meet(self.0.support(n), self.1.support(n))
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.0.feature_width(n).min(self.1.feature_width(n))
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        match (self.0.focus(n), self.1.focus(n)) {
            (Some(a), Some(b)) => meet(Some(a), Some(b)),
            (a, b) => a.or(b),
        }
    }
    fn max_order(&self) -> usize {
        self.0.max_order().min(self.1.max_order())
    }
    fn label(&self) -> String {
        format!("({})*({})", self.0.label(), self.1.label())
    }
}

pub fn product(a: Fun, b: Fun) -> Fun {
    Arc::new(Product(a, b))
}

pub fn square(a: Fun) -> Fun {
    product(a.clone(), a)
}

struct Scaled {
    inner: Fun,
    ln_factor: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    sign: f64,
    label: String,
}

impl SmoothSeq for Scaled {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.inner
            .jet(n, x, order)
            .scale_ln((self.ln_factor)(n), self.sign)
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.support(n)
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.inner.feature_width(n)
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.focus(n)
    }
    fn max_order(&self) -> usize {
        self.inner.max_order()
    }
    fn label(&self) -> String {
        format!("{}*({})", self.label, self.inner.label())
    }
}

/// `c · f` for a real constant `c`.
pub fn scaled(f: Fun, c: f64) -> Fun {
    let ln_c = c.abs().ln();
    Arc::new(Scaled {
        inner: f,
        ln_factor: Arc::new(move |_| ln_c),
        sign: c.signum(),
        label: crate::asymptotics::format::num(c),
    })
}

/// `c_n · f_n` for a nonnegative growth expression `c`.
pub fn seq_scaled(f: Fun, c: &GrowthExpr) -> Fun {
    let (c2, label) = (c.clone(), format!("[{}]", c));
    Arc::new(Scaled {
        inner: f,
        ln_factor: Arc::new(move |n| c2.ln_eval(n as f64)),
        sign: 1.0,
        label,
    })
}

/// `e^{w(n)} · f_n` for an arbitrary exponent.
pub fn ln_scaled(
    f: Fun,
    label: impl Into<String>,
    ln_factor: impl Fn(u64) -> f64 + Send + Sync + 'static,
) -> Fun {
    Arc::new(Scaled {
        inner: f,
        ln_factor: Arc::new(ln_factor),
        sign: 1.0,
        label: label.into(),
    })
}

pub fn neg(f: Fun) -> Fun {
    scaled(f, -1.0)
}

pub fn difference(a: Fun, b: Fun) -> Fun {
    sum(a, neg(b))
}

struct Exp(Fun);

impl SmoothSeq for Exp {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.0.jet(n, x, order).exp()
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        None
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.0.feature_width(n)
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.0.focus(n).or(self.0.support(n))
    }
    fn max_order(&self) -> usize {
        self.0.max_order()
    }
    fn label(&self) -> String {
        format!("exp({})", self.0.label())
    }
}

pub fn exp(f: Fun) -> Fun {
    Arc::new(Exp(f))
}

/// `(e^{k} − 1)·e^{f}`, the increment `e^{f+k} − e^{f}` without cancellation.
struct ExpIncrement {
    f: Fun,
    k: Fun,
}

impl SmoothSeq for ExpIncrement {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        let kj = self.k.jet(n, x, order);
        let em1 = expm1_jet(&kj);
        em1.mul(&self.f.jet(n, x, order).exp())
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        self.k.support(n)
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.f.feature_width(n).min(self.k.feature_width(n))
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.f.focus(n).or(self.f.support(n))
    }
    fn max_order(&self) -> usize {
        self.f.max_order().min(self.k.max_order())
    }
    fn label(&self) -> String {
        format!("exp({}) * (exp({}) - 1)", self.f.label(), self.k.label())
    }
}

/// `e^k − 1` with the constant term taken by `expm1`, so tiny `k` keeps its
/// relative precision.
fn expm1_jet(k: &Jet) -> Jet {
    let order = k.order();
    let k0 = k.value();
    if k0.abs() < 0.5 {
        // e^k - 1 = expm1(k0) + e^{k0}(e^{k - k0} - 1); the tail is built
        // from the non-constant part only.
        let tail = k.sub(&Jet::constant(k0, order));
        let rest = tail.exp().sub(&Jet::constant(1.0, order)).scale(k0.exp());
        Jet::constant(k0.exp_m1(), order).add(&rest)
    } else {
        k.exp().sub(&Jet::constant(1.0, order))
    }
}

pub fn exp_increment(f: Fun, k: Fun) -> Fun {
    Arc::new(ExpIncrement { f, k })
}

struct Derivative {
    inner: Fun,
    times: usize,
}

impl SmoothSeq for Derivative {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.inner
            .jet(n, x, order + self.times)
            .derivative(self.times)
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.support(n)
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.inner.feature_width(n)
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.focus(n)
    }
    fn max_order(&self) -> usize {
        self.inner.max_order().saturating_sub(self.times)
    }
    fn label(&self) -> String {
        if self.times == 1 {
            format!("d({})", self.inner.label())
        } else {
            format!("d^{}({})", self.times, self.inner.label())
        }
    }
}

pub fn derivative(f: Fun, times: usize) -> Fun {
    Arc::new(Derivative { inner: f, times })
}

/// `f_{n0}` for every `n`.
struct Frozen {
    inner: Fun,
    n0: u64,
}

impl SmoothSeq for Frozen {
    fn jet(&self, _: u64, x: f64, order: usize) -> Jet {
        self.inner.jet(self.n0, x, order)
    }
    fn support(&self, _: u64) -> Option<(f64, f64)> {
        self.inner.support(self.n0)
    }
    fn feature_width(&self, _: u64) -> f64 {
        self.inner.feature_width(self.n0)
    }
    fn focus(&self, _: u64) -> Option<(f64, f64)> {
        self.inner.focus(self.n0)
    }
    fn max_order(&self) -> usize {
        self.inner.max_order()
    }
    fn label(&self) -> String {
        format!("{}[n={}]", self.inner.label(), self.n0)
    }
}

pub fn frozen(f: Fun, n0: u64) -> Fun {
    Arc::new(Frozen { inner: f, n0 })
}

/// Index substitution `n ↦ k·n`, e.g. `δ_{2n}`.
struct Reindexed {
    inner: Fun,
    k: u64,
}

impl SmoothSeq for Reindexed {
    fn jet(&self, n: u64, x: f64, order: usize) -> Jet {
        self.inner.jet(n * self.k, x, order)
    }
    fn support(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.support(n * self.k)
    }
    fn feature_width(&self, n: u64) -> f64 {
        self.inner.feature_width(n * self.k)
    }
    fn focus(&self, n: u64) -> Option<(f64, f64)> {
        self.inner.focus(n * self.k)
    }
    fn max_order(&self) -> usize {
        self.inner.max_order()
    }
    fn label(&self) -> String {
        format!("{}[n -> {}n]", self.inner.label(), self.k)
    }
}

pub fn reindexed(f: Fun, k: u64) -> Fun {
    Arc::new(Reindexed { inner: f, k })
}

/// Order cap used by corpus functions without an intrinsic limit.
pub fn default_max_order() -> usize {
    DEFAULT_MAX_ORDER
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_constant_matches_reference() {
        // reference value from an independent high-precision quadrature
        assert!((bump_mass() - 0.443_993_816_168_079_4).abs() < 1e-13);
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let b = bump(0.2, 0.7);
        for &x in &[-0.3, 0.0, 0.35, 0.7] {
            let j = b.jet(1, x, 4);
            for k in 0..3 {
                let h = 1e-4;
                let fd = (b.jet(1, x + h, 4).derivative_value(k)
                    - b.jet(1, x - h, 4).derivative_value(k))
                    / (2.0 * h);
                let want = j.derivative_value(k + 1);
                assert!(
                    (fd - want).abs() <= 1e-5 * (1.0 + want.abs()),
                    "x={} k={} fd={} jet={}",
                    x,
                    k,
                    fd,
                    want
                );
            }
        }
    }

    #[test]
    fn mollified_chain_rule() {
        let d = delta();
        let phi = standard_bump();
        for n in [4u64, 16, 64] {
            for k in 0..3 {
                let x = 0.3 / n as f64;
                let want = (n as f64).powi(1 + k as i32) * phi.jet(1, 0.3, 3).derivative_value(k);
                let got = d.jet(n, x, 3).derivative_value(k);
                assert!((got - want).abs() <= 1e-9 * want.abs());
            }
        }
        assert_eq!(d.support(8), Some((-0.125, 0.125)));
    }

    #[test]
    fn poly_and_trig() {
        let p = poly(&[1.0, -2.0, 3.0]);
        let j = p.jet(1, 2.0, 3);
        assert!((j.value() - 9.0).abs() < 1e-12);
        assert!((j.derivative_value(1) - 10.0).abs() < 1e-12);
        assert!((j.derivative_value(2) - 6.0).abs() < 1e-12);
        let c = cos().jet(1, 0.4, 2);
        assert!((c.derivative_value(1) + 0.4f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn exp_increment_is_cancellation_free() {
        let f = constant(3.0);
        let k = ln_scaled(sin(), "e^-n", |n| -(n as f64));
        let inc = exp_increment(f, k);
        let v = inc.jet(100, 1.0, 1).ln_abs_derivative(0);
        let want = 3.0 - 100.0 + 1f64.sin().ln();
        assert!((v - want).abs() < 1e-9);
    }
}
