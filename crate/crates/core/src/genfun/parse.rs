//! Text syntax for function sequences.
//!
//! ```text
//! fun    := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' natural)?
//! atom   := number | 'x' | 'sin' | 'cos' | 'zero' | 'phi' | 'delta'
//!         | 'bump(' number ',' number ')' | 'poly(' number (',' number)* ')'
//!         | 'mollified(' fun ',' number ')' | 'd(' fun ')' | 'exp(' fun ')'
//!         | 'reindex(' fun ',' natural ')' | '[' growth-expression ']'
//!         | '(' fun ')'
//! ```
//!
//! A bracketed growth expression is the scalar sequence `c_n`, so
//! `[exp(-n)]*sin` is `e^{-n}·sin` and `[n^-1]*delta^2` is `n^{-1}·δ_n²`.

use super::library as lib;
use super::{Fun, GenfunError};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, GenfunError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(GenfunError::Parse {
            pos: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", s))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(rest[..len].to_string())
    }

    fn number(&mut self) -> PResult<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let sign_ok = (c == '-' || c == '+') && (i == 0 || rest[..i].ends_with(['e', 'E']));
            if c.is_ascii_digit() || c == '.' || sign_ok || ((c == 'e' || c == 'E') && i > 0) {
                len = i + c.len_utf8();
            } else {
                break;
            }
        }
        match rest[..len].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos += len;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn fun(&mut self) -> PResult<Fun> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = lib::sum(acc, self.term()?);
            } else if self.eat("-") {
                acc = lib::difference(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Fun> {
        let mut acc = self.unary()?;
        while self.eat("*") {
            acc = lib::product(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Fun> {
        if self.eat("-") {
            return Ok(lib::neg(self.unary()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> PResult<Fun> {
        let base = self.atom()?;
        if self.eat("^") {
            let at = self.pos;
            let k = self.number()?;
            if k < 1.0 || k.fract() != 0.0 || k > 64.0 {
                self.pos = at;
                return self.err("exponent must be a natural number between 1 and 64");
            }
            let mut acc = base.clone();
            for _ in 1..(k as u32) {
                acc = lib::product(acc, base.clone());
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Fun> {
        match self.peek() {
            None => return self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let f = self.fun()?;
                self.expect(")")?;
                return Ok(f);
            }
            Some('[') => {
                self.pos += 1;
                let start = self.pos;
                let Some(end) = self.src[start..].find(']') else {
                    return self.err("unterminated '['");
                };
                let text = &self.src[start..start + end];
                let g = crate::asymptotics::parse(text).map_err(|e| GenfunError::Parse {
                    pos: start + e.position().unwrap_or(1),
                    msg: e.to_string(),
                })?;
                self.pos = start + end + 1;
                return Ok(lib::seq_scaled(lib::constant(1.0), &g));
            }
            Some(c) if c.is_ascii_digit() || c == '.' => return Ok(lib::constant(self.number()?)),
            _ => {}
        }
        let at = self.pos;
        let Some(name) = self.ident() else {
            return self.err("expected a function");
        };
        let f = match name.as_str() {
            "x" => lib::poly(&[0.0, 1.0]),
            "sin" => lib::sin(),
            "cos" => lib::cos(),
            "zero" => lib::zero(),
            "phi" => lib::standard_bump(),
            "delta" => lib::delta(),
            "bump" => {
                self.expect("(")?;
                let c = self.number()?;
                self.expect(",")?;
                let w = self.number()?;
                if w <= 0.0 {
                    return self.err("bump width must be positive");
                }
                self.expect(")")?;
                lib::bump(c, w)
            }
            "poly" => {
                self.expect("(")?;
                let mut c = vec![self.number()?];
                while self.eat(",") {
                    c.push(self.number()?);
                }
                self.expect(")")?;
                lib::poly(&c)
            }
            "mollified" => {
                self.expect("(")?;
                let p = self.fun()?;
                self.expect(",")?;
                let s = self.number()?;
                self.expect(")")?;
                if p.support(1).is_none() {
                    self.pos = at;
                    return self.err("mollified profile must have bounded support");
                }
                lib::mollified(p, s)
            }
            "d" => {
                self.expect("(")?;
                let f = self.fun()?;
                self.expect(")")?;
                lib::derivative(f, 1)
            }
            "exp" => {
                self.expect("(")?;
                let f = self.fun()?;
                self.expect(")")?;
                lib::exp(f)
            }
            "reindex" => {
                self.expect("(")?;
                let f = self.fun()?;
                self.expect(",")?;
                let k = self.number()?;
                if k < 1.0 || k.fract() != 0.0 {
                    return self.err("reindex factor must be a positive integer");
                }
                self.expect(")")?;
                lib::reindexed(f, k as u64)
            }
            other => {
                self.pos = at;
                return self.err(format!("unknown function '{}'", other));
            }
        };
        Ok(f)
    }
}

/// Parses a function-sequence reference.
pub fn parse_fun(src: &str) -> Result<Fun, GenfunError> {
    let mut p = Parser { src, pos: 0 };
    let f = p.fun()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}
