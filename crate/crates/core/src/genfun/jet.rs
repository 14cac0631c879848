//! Truncated Taylor jets with a separate logarithmic scale, so that values
//! such as `e^{n}·δ_n` or `e^{-n}·sin` at `n = 2^14` stay representable.

/// Taylor coefficients `f^{(k)}(x)/k! = e^{ln_scale} · c[k]` for `k ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    ln_scale: f64,
    c: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Jet {
            ln_scale: 0.0,
            c: vec![0.0; order + 1],
        }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { ln_scale: 0.0, c }.normalized()
    }

    /// The identity function at `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { ln_scale: 0.0, c }.normalized()
    }

    /// From plain Taylor coefficients.
    pub fn from_taylor(c: Vec<f64>) -> Self {
        Jet { ln_scale: 0.0, c }.normalized()
    }

    fn normalized(mut self) -> Self {
        let m = self.c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if m == 0.0 || !m.is_finite() {
            if m == 0.0 {
                self.ln_scale = 0.0;
            }
            return self;
        }
        self.ln_scale += m.ln();
        for v in &mut self.c {
            *v /= m;
        }
        self
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| *v == 0.0)
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.c.truncate(order + 1);
        self
    }

    /// `f^{(k)}(x)`; may overflow to `±inf` for huge scales.
    pub fn derivative_value(&self, k: usize) -> f64 {
        if self.c[k] == 0.0 {
            return 0.0;
        }
        factorial(k) * self.c[k] * self.ln_scale.exp()
    }

    pub fn value(&self) -> f64 {
        self.derivative_value(0)
    }

    /// `ln |f^{(k)}(x)|`, finite whenever the derivative is nonzero.
    pub fn ln_abs_derivative(&self, k: usize) -> f64 {
        if self.c[k] == 0.0 {
            return f64::NEG_INFINITY;
        }
        factorial(k).ln() + self.ln_scale + self.c[k].abs().ln()
    }

    pub fn scale(&self, v: f64) -> Jet {
        Jet {
            ln_scale: self.ln_scale,
            c: self.c.iter().map(|x| x * v).collect(),
        }
        .normalized()
    }

    /// Multiplies by `sign · e^{ln_factor}`.
    pub fn scale_ln(&self, ln_factor: f64, sign: f64) -> Jet {
        if ln_factor == f64::NEG_INFINITY {
            return Jet::zero(self.order());
        }
        Jet {
            ln_scale: self.ln_scale + ln_factor,
            c: self.c.iter().map(|x| x * sign).collect(),
        }
    }

    /// `g(x) = f(a·x)` given the jet of `f` at `a·x`.
    pub fn chain_linear(&self, a: f64) -> Jet {
        let mut p = 1.0;
        let c = self
            .c
            .iter()
            .map(|v| {
                let out = v * p;
                p *= a;
                out
            })
            .collect();
        Jet {
            ln_scale: self.ln_scale,
            c,
        }
        .normalized()
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let k = self.order().min(o.order());
        if self.is_zero() {
            return o.clone().truncate(k);
        }
        if o.is_zero() {
            return self.clone().truncate(k);
        }
        let s = self.ln_scale.max(o.ln_scale);
        let (fa, fb) = ((self.ln_scale - s).exp(), (o.ln_scale - s).exp());
        let c = (0..=k).map(|i| self.c[i] * fa + o.c[i] * fb).collect();
        Jet { ln_scale: s, c }.normalized()
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let k = self.order().min(o.order());
        if self.is_zero() || o.is_zero() {
            return Jet::zero(k);
        }
        let c = (0..=k)
            .map(|i| (0..=i).map(|j| self.c[j] * o.c[i - j]).sum())
            .collect();
        Jet {
            ln_scale: self.ln_scale + o.ln_scale,
            c,
        }
        .normalized()
    }

    /// `1/f`; requires `f(x) ≠ 0`.
    pub fn recip(&self) -> Option<Jet> {
        let a0 = self.c[0];
        if a0 == 0.0 {
            return None;
        }
        let k = self.order();
        let mut b = vec![0.0; k + 1];
        b[0] = 1.0 / a0;
        for i in 1..=k {
            let s: f64 = (1..=i).map(|j| self.c[j] * b[i - j]).sum();
            b[i] = -s / a0;
        }
        Some(
            Jet {
                ln_scale: -self.ln_scale,
                c: b,
            }
            .normalized(),
        )
    }

    /// `e^f`, by `k e_k = Σ_j j a_j e_{k-j}` on the non-constant part; the
    /// constant part goes into the scale.
    pub fn exp(&self) -> Jet {
        let k = self.order();
        let sc = self.ln_scale.exp();
        let a: Vec<f64> = self.c.iter().map(|v| v * sc).collect();
        let mut e = vec![0.0; k + 1];
        e[0] = 1.0;
        for i in 1..=k {
            let s: f64 = (1..=i).map(|j| j as f64 * a[j] * e[i - j]).sum();
            e[i] = s / i as f64;
        }
        Jet {
            ln_scale: a[0],
            c: e,
        }
        .normalized()
    }

    /// `f^{(times)}` as a jet of lower order.
    pub fn derivative(&self, times: usize) -> Jet {
        let k = self.order();
        if times > k {
            return Jet::zero(0);
        }
        let c = (0..=k - times)
            .map(|i| {
                let f: f64 = ((i + 1)..=(i + times)).map(|j| j as f64).product();
                self.c[i + times] * f
            })
            .collect();
        Jet {
            ln_scale: self.ln_scale,
            c,
        }
        .normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-10 * (1.0 + b.abs())
    }

    #[test]
    fn exp_of_linear() {
        // e^{2x} at x = 0.5: k-th derivative 2^k e
        let j = Jet::variable(0.5, 6).scale(2.0).exp();
        for k in 0..=6 {
            assert!(close(
                j.derivative_value(k),
                2f64.powi(k as i32) * 1f64.exp()
            ));
        }
    }

    #[test]
    fn reciprocal_and_product() {
        // 1/(1 + x) at x = 1: k-th derivative (-1)^k k! / 2^{k+1}
        let j = Jet::constant(1.0, 5)
            .add(&Jet::variable(1.0, 5))
            .recip()
            .unwrap();
        for k in 0..=5 {
            let want = (-1f64).powi(k as i32) * factorial(k) / 2f64.powi(k as i32 + 1);
            assert!(close(j.derivative_value(k), want));
        }
        let x = Jet::variable(3.0, 4);
        let sq = x.mul(&x);
        assert!(close(sq.derivative_value(0), 9.0));
        assert!(close(sq.derivative_value(1), 6.0));
        assert!(close(sq.derivative_value(2), 2.0));
        assert_eq!(sq.derivative_value(3), 0.0);
    }

    #[test]
    fn huge_scales_survive() {
        let j = Jet::constant(1.0, 2).scale_ln(-20_000.0, 1.0);
        assert!(close(j.ln_abs_derivative(0), -20_000.0));
        let big = Jet::constant(5000.0, 2).exp();
        assert!(close(big.ln_abs_derivative(0), 5000.0));
        assert_eq!(big.ln_abs_derivative(1), f64::NEG_INFINITY);
    }

    #[test]
    fn derivative_shifts() {
        let j = Jet::variable(2.0, 5)
            .mul(&Jet::variable(2.0, 5))
            .mul(&Jet::variable(2.0, 5));
        let d = j.derivative(1);
        assert!(close(d.value(), 12.0));
        assert!(close(d.derivative_value(1), 12.0));
    }
}
