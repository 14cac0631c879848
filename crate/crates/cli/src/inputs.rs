//! Parsing of command-line operands: sequences, scalar maps and function maps.

use ultraseq_core::genfun::{parse_fun, Fun};
use ultraseq_core::gennum::NumRep;
use ultraseq_core::temperate::{FunctionMap, ScalarMap};

use crate::CliError;

/// A scalar sequence or a smooth-function sequence.
#[derive(Clone)]
pub enum Input {
    Num(NumRep),
    Fun(Fun),
}

impl Input {
    pub fn label(&self) -> String {
        match self {
            Input::Num(x) => x.label(),
            Input::Fun(f) => f.label(),
        }
    }
}

/// Parses `text` as a growth expression first and as a function sequence
/// second. When both fail the error that got further is reported.
pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let num_err = match NumRep::parse(text) {
        Ok(x) => return Ok(Input::Num(x)),
        Err(e) => e,
    };
    let fun_err = match parse_fun(text) {
        Ok(f) => return Ok(Input::Fun(f)),
        Err(e) => e,
    };
    let fun_pos = match &fun_err {
        ultraseq_core::genfun::GenfunError::Parse { pos, .. } => Some(*pos),
        _ => None,
    };
    match (num_err.position(), fun_pos) {
        (Some(a), Some(b)) if b > a => Err(CliError::Parse {
            input: text.into(),
            column: b,
            msg: fun_err.to_string(),
        }),
        (Some(a), _) => Err(CliError::Parse {
            input: text.into(),
            column: a,
            msg: num_err.to_string(),
        }),
        _ => Err(CliError::Parse {
            input: text.into(),
            column: 1,
            msg: num_err.to_string(),
        }),
    }
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("{}: '{}' is not a number", what, s)))
}

fn numbers(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|p| number(p, what)).collect()
}

/// Scalar maps: `x`, `x^K`, `exp`, `log1p`, `inv-log`, `poly:C0,C1,..`,
/// `affine:A,B`, and compositions `OUTER@INNER` (also written with `∘`).
pub fn parse_scalar_map(text: &str) -> Result<ScalarMap, CliError> {
    let parts: Vec<&str> = text.split(['@', '∘']).map(str::trim).collect();
    if parts.len() > 1 {
        let maps = parts
            .iter()
            .map(|p| parse_scalar_map(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut it = maps.into_iter().rev();
        let first = it.next().expect("split yields at least one part");
        return Ok(it.fold(first, |inner, outer| ScalarMap::compose(&outer, &inner)));
    }
    let t = text.trim();
    if let Some(k) = t.strip_prefix("x^") {
        let k = number(k.trim_start_matches('(').trim_end_matches(')'), "power")?;
        if k <= 0.0 {
            return Err(CliError::Usage(format!(
                "power maps need a positive exponent, got {}",
                k
            )));
        }
        return Ok(ScalarMap::power(k));
    }
    if let Some(c) = t.strip_prefix("poly:") {
        let c = numbers(c, "poly coefficient")?;
        if c.iter().any(|v| *v < 0.0) {
            return Err(CliError::Usage(
                "poly coefficients must be nonnegative".into(),
            ));
        }
        return Ok(ScalarMap::poly(&c));
    }
    if let Some(c) = t.strip_prefix("affine:") {
        let c = numbers(c, "affine coefficient")?;
        let [a, b] = c[..] else {
            return Err(CliError::Usage("affine takes A,B".into()));
        };
        if a < 0.0 || b < 0.0 {
            return Err(CliError::Usage(
                "affine coefficients must be nonnegative".into(),
            ));
        }
        return Ok(ScalarMap::affine(a, b));
    }
    match t {
        "x" | "id" | "identity" => Ok(ScalarMap::identity()),
        "exp" => Ok(ScalarMap::exp()),
        "log1p" | "log(1+x)" => Ok(ScalarMap::log1p()),
        "inv-log" | "1/log(1/x)" => Ok(ScalarMap::inv_log()),
        other => Err(CliError::Usage(format!("unknown scalar map '{}' (x, x^K, exp, log1p, inv-log, poly:C0,C1,.., affine:A,B, OUTER@INNER)", other))),
    }
}

/// Function maps acting componentwise: `square`, `derivative`, `identity`, `exp`.
pub fn parse_function_map(text: &str) -> Result<FunctionMap, CliError> {
    match text.trim() {
        "square" => Ok(FunctionMap::square()),
        "derivative" | "d" => Ok(FunctionMap::derivative()),
        "identity" | "id" => Ok(FunctionMap::identity()),
        // claimed polynomial bound, which the check refutes
        "exp" => Ok(FunctionMap::exp(ScalarMap::power(8.0))),
        other => Err(CliError::Usage(format!(
            "unknown function map '{}' (square, derivative, identity, exp)",
            other
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_pick_the_right_grammar() {
        assert!(matches!(
            parse_input("n^2 - log(n)").unwrap(),
            Input::Num(_)
        ));
        assert!(matches!(parse_input("delta^2").unwrap(), Input::Fun(_)));
        assert!(matches!(parse_input("[n^-1]*sin").unwrap(), Input::Fun(_)));
        match parse_input("n^2 + ") {
            Err(CliError::Parse { column, .. }) => assert!(column >= 5),
            _ => panic!("expected a parse error"),
        }
    }

    #[test]
    fn scalar_maps() {
        assert!((parse_scalar_map("x^2").unwrap().eval(3.0) - 9.0).abs() < 1e-12);
        assert!((parse_scalar_map("affine:2,1").unwrap().eval(3.0) - 7.0).abs() < 1e-12);
        let c = parse_scalar_map("exp@x^2").unwrap();
        assert!((c.eval(1.5) - 2.25f64.exp()).abs() < 1e-12);
        assert!(parse_scalar_map("x^-1").is_err());
        assert!(parse_scalar_map("tan").is_err());
    }
}
