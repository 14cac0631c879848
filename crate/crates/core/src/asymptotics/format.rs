//! Canonical text for terms. Numbers use the shortest decimal form that
//! reads back to the same `f64`, so formatting round-trips through the parser.

use super::term::GrowthTerm;

pub(crate) fn num(x: f64) -> String {
    format!("{}", x)
}

pub(crate) fn power_str(base: &str, p: f64) -> String {
    if p == 1.0 {
        base.to_string()
    } else {
        format!("{}^{}", base, num(p))
    }
}

fn exp_poly(t: &GrowthTerm) -> String {
    let mut s = String::new();
    for (i, a) in t.exp_part().iter().enumerate() {
        let mut factors = Vec::new();
        if a.d != 0.0 {
            factors.push(power_str("n", a.d));
        }
        if a.e != 0.0 {
            factors.push(power_str("log(n)", a.e));
        }
        let mag = a.c.abs();
        let body = if mag == 1.0 {
            factors.join("*")
        } else {
            format!("{}*{}", num(mag), factors.join("*"))
        };
        match (i, a.c < 0.0) {
            (0, true) => s.push_str(&format!("-{}", body)),
            (0, false) => s.push_str(&body),
            (_, true) => s.push_str(&format!(" - {}", body)),
            (_, false) => s.push_str(&format!(" + {}", body)),
        }
    }
    s
}

/// `coeff*n^a*log(n)^b*loglog(n)^c*exp(...)`, omitting unit factors.
pub(crate) fn term_str(t: &GrowthTerm) -> String {
    term_str_with(t, t.coeff(), true)
}

/// Formats `t` with an explicit coefficient magnitude; `show_unit` controls
/// whether a lone coefficient of 1 is printed.
pub(crate) fn term_str_with(t: &GrowthTerm, coeff: f64, show_unit: bool) -> String {
    let mut factors = Vec::new();
    if t.pow_n() != 0.0 {
        factors.push(power_str("n", t.pow_n()));
    }
    if t.pow_log() != 0.0 {
        factors.push(power_str("log(n)", t.pow_log()));
    }
    if t.pow_loglog() != 0.0 {
        factors.push(power_str("loglog(n)", t.pow_loglog()));
    }
    if !t.exp_part().is_empty() {
        factors.push(format!("exp({})", exp_poly(t)));
    }
    if coeff != 1.0 || (factors.is_empty() && show_unit) {
        factors.insert(0, num(coeff));
    }
    factors.join("*")
}

#[cfg(test)]
mod tests {
    use crate::asymptotics::GrowthExpr;

    #[test]
    fn canonical_forms() {
        let cases = [
            ("n^2 * log(n)", "n^2*log(n)"),
            ("exp(-2*n)", "exp(-2*n)"),
            ("n^-3", "n^-3"),
            ("n^7 + exp(3*n^0.5)", "exp(3*n^0.5) + n^7"),
            ("alt(n, 2)", "alt(n, 2)"),
            ("1/log(n)", "log(n)^-1"),
            ("exp(n - log(n)^2)", "exp(n - log(n)^2)"),
            ("0.5", "0.5"),
        ];
        for (src, want) in cases {
            let e: GrowthExpr = src.parse().unwrap();
            assert_eq!(e.to_string(), want, "formatting {}", src);
        }
    }
}
