//! Text format for polynomials: `3/2*x^2*y + (z5)*y^4 - x'`.
//!
//! `(zN)` is the root of unity `exp(2πi/N)`; identifiers may carry trailing
//! primes. Division is allowed only by nonzero constants.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclotomic::CycRat;
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Zeta(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(position: usize, message: &str) -> Error {
    Error::Parse {
        position,
        message: message.to_owned(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1
            }
            b'(' => {
                // `(zN)` with no spaces is a root of unity.
                let rest = &bytes[i + 1..];
                if rest.first() == Some(&b'z') {
                    let digits = rest[1..].iter().take_while(|b| b.is_ascii_digit()).count();
                    if digits > 0 && rest.get(1 + digits) == Some(&b')') {
                        let n: u32 = core::str::from_utf8(&rest[1..1 + digits])
                            .unwrap()
                            .parse()
                            .map_err(|_| err(i, "root-of-unity order too large"))?;
                        if n == 0 {
                            return Err(err(i, "root-of-unity order must be positive"));
                        }
                        out.push((i, Tok::Zeta(n)));
                        i += digits + 3;
                        continue;
                    }
                }
                out.push((i, Tok::LParen));
                i += 1
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                out.push((start, Tok::Num(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i] == b'\'' {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_owned())));
            }
            _ => return Err(err(i, &format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.num_terms() > 1 || d.order().map_or(false, |o| o > 0) {
                        return Err(err(at, "division only by constants"));
                    }
                    let c = d.constant_term();
                    let inv = c.inv().map_err(|_| err(at, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.here();
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| err(at, "exponent too large"))?;
                    if negative {
                        // Negative powers only make sense for constants.
                        if base.order().map_or(false, |o| o > 0) || base.num_terms() != 1 {
                            return Err(err(at, "negative exponent on non-constant"));
                        }
                        let c = base.constant_term().powi(-(k as i64)).map_err(|_| err(at, "division by zero"))?;
                        return Ok(Poly::constant(self.vars, c));
                    }
                    Ok(base.pow(k))
                }
                _ => Err(err(at, "expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(
                    self.vars,
                    CycRat::from_rational(BigRational::from_integer(n)),
                ))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Poly::var(self.vars, &name))
            }
            Some(Tok::Zeta(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.vars, CycRat::zeta(n)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.here(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(_) => Err(err(at, "unexpected token")),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Identifiers occurring in `src`, sorted.
pub fn identifiers(src: &str) -> Result<Vec<String>> {
    let toks = lex(src)?;
    let set: BTreeSet<String> = toks
        .into_iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    Ok(set.into_iter().collect())
}

/// Parse with variables ordered alphabetically.
pub fn parse_poly(src: &str) -> Result<Poly> {
    parse_poly_with_vars(src, &[])
}

/// Parse with `vars` first, followed by any other identifiers in sorted order.
pub fn parse_poly_with_vars(src: &str, vars: &[String]) -> Result<Poly> {
    let toks = lex(src)?;
    let mut all = vars.to_vec();
    for id in identifiers(src)? {
        if !all.contains(&id) {
            all.push(id);
        }
    }
    if toks.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        vars: &all,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    out.with_vars(&all)
}

/// Split a comma-separated list at top level (commas inside parentheses are kept).
pub fn split_list(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(core::mem::take(&mut cur).trim().to_owned());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_owned());
    }
    out
}

/// Parse a constant such as `3/2`, `-1` or `(z5)^2` into a field element.
pub fn parse_constant(src: &str) -> Result<CycRat> {
    let p = parse_poly(src)?;
    if !p.used_vars().is_empty() {
        return Err(err(0, "expected a constant"));
    }
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::names;

    #[test]
    fn grammar() {
        let p = parse_poly("3/2*x^2*y + (z5)*y^4").unwrap();
        assert_eq!(p.vars(), names(&["x", "y"]).as_slice());
        assert_eq!(p.num_terms(), 2);
        let q = parse_poly("x' - x").unwrap();
        assert_eq!(q.vars(), names(&["x", "x'"]).as_slice());
        let z = parse_constant("(z5)^5").unwrap();
        assert!(z.is_one());
        assert_eq!(parse_constant("-3/6").unwrap(), CycRat::from_frac(-1, 2));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x^2 + $y") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_poly("x^2 +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x/y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(x+1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn explicit_variable_order() {
        let p = parse_poly_with_vars("y^2 + w*x", &names(&["x", "y"])).unwrap();
        assert_eq!(p.vars(), names(&["x", "y", "w"]).as_slice());
    }

    #[test]
    fn lists() {
        assert_eq!(split_list("2*x, 5*y^4"), ["2*x", "5*y^4"]);
        assert_eq!(split_list("(1,2), x"), ["(1,2)", "x"]);
    }
}
