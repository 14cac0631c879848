//! Tail estimator for `limsup_n exp(r_n · ln f_n)` from samples.
//!
//! Writing `u = 1/r` and `L = ln f`, the limit of `r·L = L/u` equals the
//! limit of the secant slopes `ΔL/Δu` between windows whenever the latter
//! exists. Slopes are computed between the suprema of consecutive dyadic
//! windows and extrapolated linearly in `1/u`, which removes the leading
//! `O(1/u)` bias of slowly varying factors such as `log n` powers.

use super::SeqError;

/// Sample points per dyadic window (each also contributes its successor so
/// both parities are seen).
const POINTS_PER_WINDOW: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trend {
    Finite,
    ToZero,
    ToInfinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    /// Extrapolated `lim r·ln f`; `±inf` for the divergent trends.
    pub log_value: f64,
    pub log_lo: f64,
    pub log_hi: f64,
    pub trend: Trend,
    /// Supremum of `r·ln f` over the last window.
    pub last_window: f64,
    pub windows: usize,
}

#[derive(Clone, Copy, Debug)]
struct Window {
    /// Window maximum of `r·ln f`.
    y: f64,
    /// `1/r` and `ln f` at the maximizing index.
    u: f64,
    l: f64,
}

fn window_points(lo: u64, hi: u64) -> Vec<u64> {
    let mut pts = Vec::new();
    let span = hi - lo;
    let steps = POINTS_PER_WINDOW.min(span.max(1));
    for i in 0..=steps {
        let n = lo + span * i / steps;
        pts.push(n);
        if n < hi {
            pts.push(n + 1);
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Only the last windows enter the estimate.
const USED_WINDOWS: usize = 4;

/// Dyadic windows `[2^j, 2^{j+1} − 1]` inside `[n_min, n_max]`.
fn window_bounds(n_min: u64, n_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = n_min.max(2).next_power_of_two();
    while lo.saturating_mul(2) - 1 <= n_max {
        out.push((lo, lo * 2 - 1));
        lo *= 2;
    }
    out
}

/// Samples `r_n · ln f_n` over the last dyadic windows inside
/// `[n_min, n_max]`, returning them with the total window count.
fn windows(
    ln_f: &(dyn Fn(u64) -> f64 + Sync),
    r: &(dyn Fn(u64) -> f64 + Sync),
    n_min: u64,
    n_max: u64,
) -> (Vec<Window>, usize) {
    let bounds = window_bounds(n_min, n_max);
    let total = bounds.len();
    let mut out = Vec::new();
    for &(lo, hi) in &bounds[total.saturating_sub(USED_WINDOWS)..] {
        let mut best = Window {
            y: f64::NEG_INFINITY,
            u: f64::NAN,
            l: f64::NEG_INFINITY,
        };
        for n in window_points(lo, hi) {
            let rn = r(n);
            let l = ln_f(n);
            let y = if l == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                rn * l
            };
            if y > best.y || best.u.is_nan() {
                best = Window { y, u: 1.0 / rn, l };
            }
        }
        out.push(best);
    }
    (out, total)
}

fn slope(a: &Window, b: &Window) -> (f64, f64) {
    let s = (b.l - a.l) / (b.u - a.u);
    let rho = 2.0 / (a.u + b.u);
    (s, rho)
}

/// Linear extrapolation of slopes to `ρ = 0`.
fn extrapolate(p0: (f64, f64), p1: (f64, f64)) -> f64 {
    let (s0, r0) = p0;
    let (s1, r1) = p1;
    if (r1 - r0).abs() < 1e-300 {
        return s1;
    }
    s1 - r1 * (s1 - s0) / (r1 - r0)
}

/// Estimates `lim sup r_n ln f_n`. Errors when fewer than four windows fit
/// or the samples are not usable.
pub fn estimate(
    ln_f: &(dyn Fn(u64) -> f64 + Sync),
    r: &(dyn Fn(u64) -> f64 + Sync),
    n_min: u64,
    n_max: u64,
) -> Result<Estimate, SeqError> {
    let (w, total) = windows(ln_f, r, n_min, n_max);
    if total < USED_WINDOWS {
        return Err(SeqError::Unstable(format!(
            "only {} dyadic windows in [{}, {}]; need {}",
            total, n_min, n_max, USED_WINDOWS
        )));
    }
    let k = w.len();
    let last = w[k - 1];
    if w[k - 1].y == f64::NEG_INFINITY && w[k - 2].y == f64::NEG_INFINITY {
        return Ok(Estimate {
            log_value: f64::NEG_INFINITY,
            log_lo: f64::NEG_INFINITY,
            log_hi: f64::NEG_INFINITY,
            trend: Trend::ToZero,
            last_window: last.y,
            windows: total,
        });
    }
    if w[k - 4..]
        .iter()
        .any(|x| !x.y.is_finite() || !x.u.is_finite() || x.u <= 0.0)
    {
        return Err(SeqError::Unstable(
            "tail samples are intermittently zero or non-finite".into(),
        ));
    }
    let p = [
        slope(&w[k - 4], &w[k - 3]),
        slope(&w[k - 3], &w[k - 2]),
        slope(&w[k - 2], &w[k - 1]),
    ];
    let (s1, _) = p[2];
    let (s0, _) = p[1];
    let curvature = (s1 - s0) / (w[k - 1].u - w[k - 2].u);
    if (curvature * last.u).abs() > 1.0 && s1.abs() > 1.0 {
        let trend = if s1 > 0.0 {
            Trend::ToInfinity
        } else {
            Trend::ToZero
        };
        let v = if s1 > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        return Ok(Estimate {
            log_value: v,
            log_lo: v,
            log_hi: v,
            trend,
            last_window: last.y,
            windows: total,
        });
    }
    let alpha = extrapolate(p[1], p[2]);
    let alpha2 = extrapolate(p[0], p[1]);
    // Half-width: disagreement between successive extrapolations, plus a
    // share of the correction the extrapolation applied, floored at 1%.
    let delta = 0.01f64
        .max(2.0 * (alpha - alpha2).abs())
        .max(0.25 * (alpha - s1).abs());
    Ok(Estimate {
        log_value: alpha,
        log_lo: alpha - delta,
        log_hi: alpha + delta,
        trend: Trend::Finite,
        last_window: last.y,
        windows: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colombeau(n: u64) -> f64 {
        1.0 / (n as f64).ln()
    }

    fn run(ln_f: impl Fn(u64) -> f64 + Sync, r: impl Fn(u64) -> f64 + Sync) -> Estimate {
        estimate(&ln_f, &r, 16, 1_000_000).unwrap()
    }

    fn assert_band(e: &Estimate, exact: f64) {
        assert_eq!(e.trend, Trend::Finite);
        assert!(
            e.log_lo <= exact && exact <= e.log_hi,
            "{:?} vs {}",
            e,
            exact
        );
        let width = e.log_hi.exp() - e.log_lo.exp();
        assert!(width <= 0.25 * exact.exp(), "band too wide: {:?}", e);
    }

    #[test]
    fn powers_and_constants() {
        for g in [-3.0, 0.5, 7.0] {
            assert_band(&run(move |n| g * (n as f64).ln(), colombeau), g);
        }
        assert_band(&run(|_| 5f64.ln(), colombeau), 0.0);
        assert_band(&run(|n| -(n as f64).ln().ln(), colombeau), 0.0);
        assert_band(&run(|n| 0.3 * n as f64, |n| 1.0 / n as f64), 0.3);
        assert_band(
            &run(
                |n| 2.0 * (n as f64).ln() + 4.0 * (n as f64).ln().ln(),
                colombeau,
            ),
            2.0,
        );
    }

    #[test]
    fn divergent_trends() {
        let e = run(|n| n as f64, colombeau);
        assert_eq!(e.trend, Trend::ToInfinity);
        let e = run(|n| -(n as f64).ln().powi(2), colombeau);
        assert_eq!(e.trend, Trend::ToZero);
        let e = run(|n| if n > 100 { f64::NEG_INFINITY } else { 1.0 }, colombeau);
        assert_eq!(e.trend, Trend::ToZero);
    }

    #[test]
    fn oscillation_takes_the_upper_branch() {
        let e = run(
            |n| {
                if n % 2 == 0 {
                    2.0 * (n as f64).ln()
                } else {
                    -(n as f64).ln()
                }
            },
            colombeau,
        );
        assert_band(&e, 2.0);
    }

    #[test]
    fn short_ranges_are_refused() {
        assert!(estimate(&|n: u64| (n as f64).ln(), &colombeau, 16, 100).is_err());
    }
}
