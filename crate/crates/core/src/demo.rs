//! The δ/δ² walkthrough: scaling of seminorms, classification, pairings and
//! weak association of `δ_n = n φ(n x)` and its square.

use std::fmt;

use crate::genfun::library::{self as lib, bump_mass};
use crate::genfun::{
    classify_fun, ln_seminorm, pairing, test_set, weak_assoc_fun, Fun, GenfunError, TestFunction,
};
use crate::gennum::{AssocKind, Space};
use crate::seqspaces::Classification;
use crate::values::{fmt_sig, Truth};

/// Indices `2^4 .. 2^10` used for slope fits.
pub const SLOPE_EXPONENTS: (i32, i32) = (4, 10);

/// Least-squares slope of `ln p_ν(f_n)` against `ln n`.
pub fn seminorm_slope(f: &Fun, nu: usize) -> Result<f64, GenfunError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in SLOPE_EXPONENTS.0..=SLOPE_EXPONENTS.1 {
        xs.push((k as f64) * 2f64.ln());
        ys.push(ln_seminorm(f.as_ref(), 1u64 << k, nu)?);
    }
    Ok(fit(&xs, &ys))
}

fn fit(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// `∫ φ²` for the standard bump.
pub fn bump_square_mass() -> f64 {
    let phi = lib::standard_bump();
    quadrature::integrate(|x| phi.jet(1, x, 0).value().powi(2), -1.0, 1.0, 1e-13).integral
}

pub struct DeltaDemo {
    /// `(ν, slope)` for `ν ≤ 3`.
    pub slopes: Vec<(usize, f64)>,
    pub delta_class: Classification,
    pub delta_sq_class: Classification,
    /// `|⟨δ_256, ψ⟩ − ψ(0)|` over the probe set.
    pub delta_pairing_error: f64,
    /// Slope of `ln ⟨δ_n², ψ⟩` against `ln n`, worst over the probe set.
    pub sq_pairing_slopes: Vec<f64>,
    /// Weak association of `δ²` with each candidate.
    pub sq_candidates: Vec<(String, Truth)>,
    /// `max_ψ |⟨n^{-1} δ_n² − (∫φ²) δ_n, ψ⟩|` at `n = 1024`.
    pub rescaled_gap: f64,
    pub phi_sq_mass: f64,
}

fn probe_functions() -> Vec<TestFunction> {
    test_set()
}

/// Runs the walkthrough on the given space.
pub fn delta_demo(space: &Space) -> Result<DeltaDemo, GenfunError> {
    let delta = lib::delta();
    let sq = lib::square(delta.clone());
    let slopes = (0..=3)
        .map(|nu| Ok((nu, seminorm_slope(&delta, nu)?)))
        .collect::<Result<Vec<_>, GenfunError>>()?;
    let delta_class = classify_fun(&delta, 2, space)?;
    let delta_sq_class = classify_fun(&sq, 2, space)?;
    let psis = probe_functions();
    let mut delta_pairing_error = 0.0f64;
    let mut sq_pairing_slopes = Vec::new();
    for psi in &psis {
        delta_pairing_error =
            delta_pairing_error.max((pairing(delta.as_ref(), 256, psi)? - psi.value(0.0)).abs());
        let xs: Vec<f64> = (4..=10).map(|k| (k as f64) * 2f64.ln()).collect();
        let ys = (4..=10)
            .map(|k| Ok(pairing(sq.as_ref(), 1u64 << k, psi)?.ln()))
            .collect::<Result<Vec<f64>, GenfunError>>()?;
        sq_pairing_slopes.push(fit(&xs, &ys));
    }
    let phi_sq_mass = bump_square_mass();
    let candidates: Vec<(&str, Fun)> = vec![
        ("0", lib::zero()),
        ("delta", delta.clone()),
        ("(int phi^2) delta", lib::scaled(delta.clone(), phi_sq_mass)),
        ("phi", lib::standard_bump()),
        ("sin", lib::sin()),
    ];
    let mut sq_candidates = Vec::new();
    for (name, c) in &candidates {
        let v = weak_assoc_fun(&sq, c, &AssocKind::Weak, &psis, space)?;
        sq_candidates.push((name.to_string(), v.holds));
    }
    let rescaled = crate::genfun::parse_fun("[n^-1]*delta^2").expect("fixed text parses");
    let target = lib::scaled(delta, phi_sq_mass);
    let mut rescaled_gap = 0.0f64;
    for psi in &psis {
        let d = pairing(rescaled.as_ref(), 1024, psi)? - pairing(target.as_ref(), 1024, psi)?;
        rescaled_gap = rescaled_gap.max(d.abs());
    }
    Ok(DeltaDemo {
        slopes,
        delta_class,
        delta_sq_class,
        delta_pairing_error,
        sq_pairing_slopes,
        sq_candidates,
        rescaled_gap,
        phi_sq_mass,
    })
}

impl fmt::Display for DeltaDemo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "delta_n = n phi(n x), phi the unit-mass bump (mass constant {})",
            fmt_sig(bump_mass(), 9)
        )?;
        for (nu, s) in &self.slopes {
            writeln!(
                f,
                "  slope of log p_{}(delta_n) vs log n: {} (scaling law {})",
                nu,
                fmt_sig(*s, 9),
                nu + 1
            )?;
        }
        writeln!(f, "  delta_n: {}", self.delta_class.verdict)?;
        writeln!(f, "  delta_n^2: {}", self.delta_sq_class.verdict)?;
        writeln!(
            f,
            "  max |<delta_256, psi> - psi(0)| = {}",
            fmt_sig(self.delta_pairing_error, 9)
        )?;
        let s: Vec<String> = self
            .sq_pairing_slopes
            .iter()
            .map(|v| fmt_sig(*v, 9))
            .collect();
        writeln!(
            f,
            "  slopes of log <delta_n^2, psi> vs log n: {}",
            s.join(", ")
        )?;
        for (c, t) in &self.sq_candidates {
            let word = match t {
                Truth::Yes => "holds",
                Truth::No => "fails",
                Truth::Inconclusive => "inconclusive",
            };
            writeln!(f, "  delta_n^2 weakly associated to {}: {}", c, word)?;
        }
        write!(
            f,
            "  max |<n^-1 delta_n^2 - (int phi^2) delta_n, psi>| at n = 1024: {} (int phi^2 = {})",
            fmt_sig(self.rescaled_gap, 9),
            fmt_sig(self.phi_sq_mass, 9)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_mass_matches_a_riemann_sum() {
        let phi = lib::standard_bump();
        let k = 200_000;
        let h = 2.0 / k as f64;
        let s: f64 = (0..k)
            .map(|i| phi.jet(1, -1.0 + (i as f64 + 0.5) * h, 0).value().powi(2))
            .sum::<f64>()
            * h;
        assert!((s - bump_square_mass()).abs() < 1e-9);
    }
}
