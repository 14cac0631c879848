//! Mollifier profiles, their moment classes and the test functions used to
//! probe weak association.

use nalgebra::{DMatrix, DVector};

use super::library::{self, bump};
use super::{Fun, GenfunError, SmoothSeq};

/// `∫ x^k f`, split over summands so each piece is one smooth bump.
fn moment_of(f: &dyn SmoothSeq, k: u32) -> Result<f64, GenfunError> {
    if let Some((a, b)) = f.summands() {
        return Ok(moment_of(a.as_ref(), k)? + moment_of(b.as_ref(), k)?);
    }
    let (lo, hi) = f.support(1).ok_or(GenfunError::Unbounded)?;
    integrate(|x| x.powi(k as i32) * f.jet(1, x, 0).value(), lo, hi)
}

/// Quadrature tolerance for moments.
pub const MOMENT_TOL: f64 = 1e-9;

/// A unit-mass compactly supported profile `φ`, regularizing through
/// `φ_n = n·φ(n·)`.
#[derive(Clone)]
pub struct Mollifier {
    pub profile: Fun,
    pub support: (f64, f64),
    pub label: String,
}

impl std::fmt::Debug for Mollifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mollifier({})", self.label)
    }
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64, GenfunError> {
    if b <= a {
        return Ok(0.0);
    }
    let out = quadrature::integrate(f, a, b, MOMENT_TOL * 1e-3);
    if !out.integral.is_finite() || out.error_estimate > MOMENT_TOL * out.integral.abs().max(1.0) {
        return Err(GenfunError::Quadrature {
            a,
            b,
            estimate: out.error_estimate,
        });
    }
    Ok(out.integral)
}

impl Mollifier {
    /// The standard even bump.
    pub fn standard() -> Self {
        Mollifier {
            profile: library::standard_bump(),
            support: (-1.0, 1.0),
            label: "phi".into(),
        }
    }

    /// `Σ_j a_j φ(x/λ_j)/λ_j` with `λ_j = 2^j`, the weights solving the
    /// Vandermonde system that cancels every even moment up to `q`. Odd
    /// moments vanish by symmetry, so the class is `q` rounded up to odd.
    pub fn with_vanishing_moments(q: u32) -> Self {
        let evens: Vec<i32> = (0..=q as i32).filter(|k| k % 2 == 0).collect();
        let m = evens.len();
        let lambdas: Vec<f64> = (0..m).map(|j| 2f64.powi(j as i32)).collect();
        let v = DMatrix::from_fn(m, m, |i, j| lambdas[j].powi(evens[i]));
        let mut rhs = DVector::zeros(m);
        rhs[0] = 1.0;
        let a = v
            .lu()
            .solve(&rhs)
            .expect("Vandermonde matrix with distinct nodes is invertible");
        let mut profile: Option<Fun> = None;
        for (j, &lam) in lambdas.iter().enumerate() {
            let term = library::scaled(bump(0.0, lam), a[j]);
            profile = Some(match profile {
                None => term,
                Some(p) => library::sum(p, term),
            });
        }
        let reach = lambdas[m - 1];
        Mollifier {
            profile: profile.expect("at least one term"),
            support: (-reach, reach),
            label: format!("phi[A_{}]", q | 1),
        }
    }

    pub fn from_profile(profile: Fun, label: impl Into<String>) -> Result<Self, GenfunError> {
        let support = profile.support(1).ok_or(GenfunError::Unbounded)?;
        Ok(Mollifier {
            profile,
            support,
            label: label.into(),
        })
    }

    /// `φ_n = n·φ(n·)` as a sequence.
    pub fn sequence(&self) -> Fun {
        library::mollified(self.profile.clone(), 1.0)
    }

    /// The single function `φ_n`.
    pub fn mollify(&self, n: u64) -> Fun {
        library::frozen(self.sequence(), n)
    }

    /// `∫ x^k φ`.
    pub fn moment(&self, k: u32) -> Result<f64, GenfunError> {
        moment_of(self.profile.as_ref(), k)
    }

    /// Largest `q ≤ q_max` with `∫φ = 1` and `∫x^kφ = 0` for `1 ≤ k ≤ q`,
    /// all within `tol`.
    pub fn moment_class(&self, q_max: u32, tol: f64) -> Result<u32, GenfunError> {
        let mass = self.moment(0)?;
        if (mass - 1.0).abs() > tol {
            return Err(GenfunError::NotMollifier { integral: mass });
        }
        let mut q = 0;
        for k in 1..=q_max {
            if self.moment(k)?.abs() > tol {
                break;
            }
            q = k;
        }
        Ok(q)
    }
}

/// A compactly supported test function.
#[derive(Clone)]
pub struct TestFunction {
    pub psi: Fun,
    pub support: (f64, f64),
    pub label: String,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TestFunction({})", self.label)
    }
}

impl TestFunction {
    pub fn bump(center: f64, width: f64) -> Self {
        let psi = bump(center, width);
        TestFunction {
            label: psi.label(),
            psi,
            support: (center - width, center + width),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.psi.jet(1, x, 0).value()
    }
}

/// The fixed five-element probe set of translated and scaled bumps.
pub fn test_set() -> Vec<TestFunction> {
    [(0.0, 1.0), (0.25, 0.5), (-0.3, 1.2), (0.0, 2.0), (0.6, 0.9)]
        .iter()
        .map(|&(c, w)| TestFunction::bump(c, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_bump_is_class_one() {
        let m = Mollifier::standard();
        assert!((m.moment(0).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(m.moment_class(6, 1e-8).unwrap(), 1);
    }

    #[test]
    fn corrected_bump_reaches_class_three() {
        let m = Mollifier::with_vanishing_moments(3);
        assert_eq!(m.moment_class(6, 1e-8).unwrap(), 3);
        // closed form of the two-term corrected bump: 4/3 φ(x) − 1/6 φ(x/2)
        let phi = library::standard_bump();
        for &x in &[0.0, 0.4, 1.3] {
            let want = 4.0 / 3.0 * phi.jet(1, x, 0).value() - phi.jet(1, x / 2.0, 0).value() / 6.0;
            assert!((m.profile.jet(1, x, 0).value() - want).abs() < 1e-12);
        }
        assert_eq!(
            Mollifier::with_vanishing_moments(5)
                .moment_class(8, 1e-7)
                .unwrap(),
            5
        );
    }

    #[test]
    fn zero_mass_is_rejected() {
        let d = library::derivative(library::standard_bump(), 1);
        let m = Mollifier::from_profile(d, "phi'").unwrap();
        assert!(matches!(
            m.moment_class(2, 1e-8),
            Err(GenfunError::NotMollifier { .. })
        ));
    }

    #[test]
    fn mollified_mass_is_invariant() {
        let m = Mollifier::standard();
        for n in [1u64, 8, 200] {
            let f = m.mollify(n);
            let (a, b) = f.support(0).unwrap();
            let i = integrate(|x| f.jet(0, x, 0).value(), a, b).unwrap();
            assert!((i - 1.0).abs() < 1e-8);
        }
    }
}
