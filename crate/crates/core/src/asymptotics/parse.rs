//! Recursive-descent parser for growth expressions.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := primary ('^' exponent)*
//! primary := number | 'n' | 'log(n)' | 'loglog(n)' | 'exp(' poly ')'
//!          | '(' expr ')' | 'alt(' expr ',' expr ')'
//! poly    := ['-'] mono (('+' | '-') mono)*
//! mono    := number | [number '*'] base ('*' base)*     base := ('n' | 'log(n)') ['^' exponent]
//! exponent:= ['-'|'+'] number | '(' ['-'] number ['/' number] ')'
//! ```
//! Division is by single-term factors only.

use super::expr::GrowthExpr;
use super::signed::SignedExpr;
use super::term::{ExpAtom, GrowthTerm};
use super::AsymptoticsError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer, AsymptoticsError> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut toks = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '.' && i + 1 < b.len() && (b[i + 1] as char).is_ascii_digit())
        {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && (b[j] as char).is_ascii_digit() {
                    i = j;
                    while i < b.len() && (b[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| AsymptoticsError::Syntax {
                pos: start + 1,
                msg: format!("bad number '{}'", text),
            })?;
            toks.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(AsymptoticsError::Syntax {
                pos: i + 1,
                msg: format!("unexpected character '{}'", c),
            });
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

type PResult<T> = Result<T, AsymptoticsError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    /// 1-based column of the current token.
    fn pos(&self) -> usize {
        self.toks[self.at].1 + 1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(AsymptoticsError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn semantic<T>(&self, pos: usize, msg: impl Into<String>) -> PResult<T> {
        Err(AsymptoticsError::Semantic {
            pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.syntax(format!("expected '{}', found {}", c, describe(self.peek())))
        }
    }

    fn expect_ident(&mut self, name: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            other => {
                let d = describe(other);
                self.syntax(format!("expected '{}', found {}", name, d))
            }
        }
    }

    fn expr(&mut self) -> PResult<GrowthExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if *self.peek() == Tok::Sym('-') {
                let p = self.pos();
                return self.semantic(
                    p,
                    "subtraction is not allowed in a nonnegative growth expression",
                );
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_expr(&mut self) -> PResult<SignedExpr> {
        let mut acc = SignedExpr::zero();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let t = SignedExpr::from_growth(&self.term()?);
            acc = if sign > 0.0 { acc.add(&t) } else { acc.sub(&t) };
            if self.eat('+') {
                sign = 1.0;
            } else if self.eat('-') {
                sign = -1.0;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<GrowthExpr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if *self.peek() == Tok::Sym('/') {
                self.bump();
                let p = self.pos();
                let d = self.factor()?;
                if d.is_zero() {
                    return self.semantic(p, "division by zero");
                }
                if d.single_term().is_none() {
                    return self.semantic(p, "division is only defined by a single-term factor");
                }
                acc = acc.mul(&d.pow(-1.0)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> PResult<GrowthExpr> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let p = self.pos();
            let s = self.exponent()?;
            base = match base.pow(s) {
                Ok(v) => v,
                Err(e) => return self.semantic(p, e.to_string()),
            };
        }
        Ok(base)
    }

    fn exponent(&mut self) -> PResult<f64> {
        if self.eat('(') {
            let neg = self.eat('-');
            let mut v = self.number()?;
            if self.eat('/') {
                let p = self.pos();
                let q = self.number()?;
                if q == 0.0 {
                    return self.semantic(p, "zero denominator in exponent");
                }
                v /= q;
            }
            self.expect(')')?;
            Ok(if neg { -v } else { v })
        } else if self.eat('-') {
            Ok(-self.number()?)
        } else {
            self.eat('+');
            self.number()
        }
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(v)
            }
            other => self.syntax(format!("expected a number, found {}", describe(&other))),
        }
    }

    fn log_call(&mut self) -> PResult<()> {
        self.expect('(')?;
        self.expect_ident("n")?;
        self.expect(')')
    }

    fn primary(&mut self) -> PResult<GrowthExpr> {
        let p = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                if !v.is_finite() {
                    return self.semantic(p, "coefficient must be finite");
                }
                Ok(GrowthExpr::constant(v))
            }
            Tok::Sym('-') => self.semantic(p, "negative coefficients are not allowed"),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(id) => {
                self.bump();
                match id.as_str() {
                    "n" => Ok(GrowthExpr::n_pow(1.0, 1.0)),
                    "log" => {
                        self.log_call()?;
                        Ok(GrowthExpr::from_term(GrowthTerm::new(
                            1.0,
                            0.0,
                            1.0,
                            0.0,
                            vec![],
                        )?))
                    }
                    "loglog" => {
                        self.log_call()?;
                        Ok(GrowthExpr::from_term(GrowthTerm::new(
                            1.0,
                            0.0,
                            0.0,
                            1.0,
                            vec![],
                        )?))
                    }
                    "exp" => {
                        self.expect('(')?;
                        let t = self.poly()?;
                        self.expect(')')?;
                        Ok(GrowthExpr::from_term(t))
                    }
                    "alt" => {
                        self.expect('(')?;
                        let a = self.expr()?;
                        self.expect(',')?;
                        let b = self.expr()?;
                        self.expect(')')?;
                        Ok(GrowthExpr::alt(a, b))
                    }
                    _ => Err(AsymptoticsError::Syntax {
                        pos: p,
                        msg: format!("unknown name '{}'", id),
                    }),
                }
            }
            other => self.syntax(format!("expected a factor, found {}", describe(&other))),
        }
    }

    /// Exponent polynomial, returned as the term it exponentiates to.
    fn poly(&mut self) -> PResult<GrowthTerm> {
        let mut coeff = 1.0;
        let mut atoms = Vec::new();
        let mut sign = if self.eat('-') { -1.0 } else { 1.0 };
        let mut pow_n = 0.0;
        loop {
            let p = self.pos();
            let (c, d, e) = self.poly_mono()?;
            let c = sign * c;
            if d == 0.0 && e == 0.0 {
                coeff *= c.exp();
            } else if d == 0.0 && e == 1.0 {
                pow_n += c;
            } else if d < 0.0 || (d == 0.0 && e < 0.0) {
                return self.semantic(p, "exponents inside exp must make the term grow (d > 0, or d = 0 with a positive log power)");
            } else {
                atoms.push(ExpAtom { c, d, e });
            }
            if self.eat('+') {
                sign = 1.0;
            } else if self.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        if !coeff.is_finite() || coeff == 0.0 {
            let p = self.pos();
            return self.semantic(p, "constant inside exp overflows");
        }
        GrowthTerm::new(coeff, pow_n, 0.0, 0.0, atoms)
    }

    fn poly_mono(&mut self) -> PResult<(f64, f64, f64)> {
        let mut c = 1.0;
        let mut d = 0.0;
        let mut e = 0.0;
        if let Tok::Num(v) = *self.peek() {
            self.bump();
            c = v;
            if !self.eat('*') {
                return Ok((c, 0.0, 0.0));
            }
        }
        loop {
            match self.peek().clone() {
                Tok::Ident(id) if id == "n" => {
                    self.bump();
                    d += if self.eat('^') { self.exponent()? } else { 1.0 };
                }
                Tok::Ident(id) if id == "log" => {
                    self.bump();
                    self.log_call()?;
                    e += if self.eat('^') { self.exponent()? } else { 1.0 };
                }
                other => {
                    return self.syntax(format!(
                        "expected 'n' or 'log(n)' in exponent, found {}",
                        describe(&other)
                    ))
                }
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((c, d, e))
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::End => Ok(()),
            other => {
                let d = describe(other);
                self.syntax(format!("unexpected {} after expression", d))
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {}", v),
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Sym(c) => format!("'{}'", c),
        Tok::End => "end of input".into(),
    }
}

/// Parses a nonnegative growth expression.
pub fn parse(src: &str) -> Result<GrowthExpr, AsymptoticsError> {
    let mut p = Parser {
        toks: lex(src)?.toks,
        at: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a signed combination: the same grammar with `-` allowed between
/// (and before) top-level terms.
pub fn parse_signed(src: &str) -> Result<SignedExpr, AsymptoticsError> {
    let mut p = Parser {
        toks: lex(src)?.toks,
        at: 0,
    };
    let e = p.signed_expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let e = parse("n^2 * log(n)").unwrap();
        let t = e.single_term().unwrap();
        assert_eq!(
            (t.coeff(), t.pow_n(), t.pow_log(), t.pow_loglog()),
            (1.0, 2.0, 1.0, 0.0)
        );
        assert!(t.exp_part().is_empty());
        assert!(parse("0").unwrap().is_zero());
        let two = parse("exp(3*n^0.5) + n^7").unwrap();
        let terms = two.terms().unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].exp_part().len(), 1);
    }

    #[test]
    fn error_positions() {
        match parse("n^2 * ") {
            Err(AsymptoticsError::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{:?}", other),
        }
        match parse("n + -3") {
            Err(AsymptoticsError::Semantic { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{:?}", other),
        }
        assert!(matches!(
            parse("exp(n^-1)"),
            Err(AsymptoticsError::Semantic { .. })
        ));
        assert!(matches!(
            parse("n - 1"),
            Err(AsymptoticsError::Semantic { .. })
        ));
        assert!(matches!(
            parse("foo(n)"),
            Err(AsymptoticsError::Syntax { .. })
        ));
        assert!(matches!(
            parse("1/(n+1)"),
            Err(AsymptoticsError::Semantic { .. })
        ));
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(parse("n^(1/2)").unwrap(), parse("n^0.5").unwrap());
        assert_eq!(parse("n^(-2)").unwrap(), parse("n^-2").unwrap());
        assert_eq!(parse("exp(2*log(n))").unwrap(), parse("n^2").unwrap());
        assert_eq!(
            parse("exp(-log(n)^2)").unwrap().to_string(),
            "exp(-log(n)^2)"
        );
        assert_eq!(parse("1e-3*n").unwrap().to_string(), "0.001*n");
    }

    #[test]
    fn signed_parse() {
        let s = parse_signed("n - n").unwrap();
        assert!(s.is_identically_zero());
        let s = parse_signed("-n + 2").unwrap();
        assert_eq!(s.to_string(), "-n + 2");
    }
}
