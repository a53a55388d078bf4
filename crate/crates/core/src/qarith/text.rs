//! Plain-text rendering and parsing of polynomials in `v`.
//!
//! Polynomials are printed in descending exponent order, e.g. `v^4+1`,
//! `-v^2+3*v-1`, `2*v^-2`. The parser accepts the same grammar with optional
//! rational coefficients (`3/4*v^2`) and surrounding whitespace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input while parsing {0}")]
    UnexpectedEnd(&'static str),
    #[error("unexpected character {found:?} at byte {pos}")]
    Unexpected { found: char, pos: usize },
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("{0}")]
    Invalid(String),
}

/// Render `(exponent, negative, magnitude)` triples in descending exponent order.
fn render_parts(mut parts: Vec<(i64, bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    parts.sort_by(|a, b| b.0.cmp(&a.0));
    let mut out = String::new();
    for (idx, (k, negative, mag)) in parts.into_iter().enumerate() {
        if negative {
            out.push('-');
        } else if idx > 0 {
            out.push('+');
        }
        let unit = mag == "1";
        match (k, unit) {
            (0, _) => out.push_str(&mag),
            (1, true) => out.push('v'),
            (1, false) => out.push_str(&format!("{mag}*v")),
            (e, true) => out.push_str(&format!("v^{e}")),
            (e, false) => out.push_str(&format!("{mag}*v^{e}")),
        }
    }
    out
}

/// Render integer-coefficient terms `(exponent, coefficient)`.
pub fn render_terms(terms: &[(i64, BigInt)]) -> String {
    render_parts(
        terms
            .iter()
            .map(|(k, c)| (*k, c.is_negative(), c.abs().to_string()))
            .collect(),
    )
}

/// Render rational-coefficient terms.
pub fn render_rational_terms(terms: &[(i64, BigRational)]) -> String {
    render_parts(
        terms
            .iter()
            .map(|(k, c)| (*k, c.is_negative(), c.abs().to_string()))
            .collect(),
    )
}

pub(crate) struct Cursor<'a> {
    pub s: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    pub fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(found) => ParseError::Unexpected {
                found,
                pos: self.pos,
            },
            None => ParseError::UnexpectedEnd("expression"),
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.s.len()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.s[start..self.pos]
    }

    /// Unsigned rational literal `123` or `12/5`.
    pub fn unsigned_rational(&mut self) -> Result<BigRational, ParseError> {
        self.skip_ws();
        let n = self.digits();
        if n.is_empty() {
            return Err(self.unexpected());
        }
        let num: BigInt = n.parse().map_err(|_| ParseError::BadNumber(n.to_string()))?;
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                // a '/' that is not followed by digits belongs to the caller
                self.pos = save;
                return Ok(BigRational::from_integer(num));
            }
            let den: BigInt = d.parse().map_err(|_| ParseError::BadNumber(d.to_string()))?;
            if den.is_zero() {
                return Err(ParseError::BadNumber(format!("{n}/{d}")));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    pub fn signed_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let d = self.digits();
        let v: i64 = d.parse().map_err(|_| ParseError::BadNumber(d.to_string()))?;
        Ok(if neg { -v } else { v })
    }

    pub fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }
}

/// Parse a polynomial in `v` into `(exponent, coefficient)` pairs (unmerged).
pub fn parse_poly(s: &str) -> Result<Vec<(i64, BigRational)>, ParseError> {
    let mut cur = Cursor::new(s);
    let terms = parse_poly_cursor(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected());
    }
    Ok(terms)
}

pub(crate) fn parse_poly_cursor(cur: &mut Cursor<'_>) -> Result<Vec<(i64, BigRational)>, ParseError> {
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        let sign = if cur.eat('-') {
            -1
        } else if cur.eat('+') {
            1
        } else if first {
            1
        } else {
            break;
        };
        first = false;
        cur.skip_ws();
        let mut coeff = BigRational::one();
        let mut has_coeff = false;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = cur.unsigned_rational()?;
            has_coeff = true;
        }
        let mut exp = 0i64;
        let save = cur.pos;
        let star = cur.eat('*');
        cur.skip_ws();
        if cur.peek() == Some('v') {
            cur.pos += 1;
            exp = 1;
            if cur.eat('^') {
                exp = cur.signed_int()?;
            }
        } else if star || !has_coeff {
            if star {
                cur.pos = save;
                if has_coeff {
                    terms.push((exp, coeff * BigRational::from_integer(sign.into())));
                    break;
                }
            }
            return Err(cur.unexpected());
        }
        terms.push((exp, coeff * BigRational::from_integer(sign.into())));
        cur.skip_ws();
        match cur.peek() {
            Some('+') | Some('-') => continue,
            _ => break,
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(ts: &[(i64, i64)]) -> Vec<(i64, BigInt)> {
        ts.iter().map(|&(k, c)| (k, BigInt::from(c))).collect()
    }

    #[test]
    fn renders_descending() {
        assert_eq!(render_terms(&ints(&[(0, 1), (4, 1)])), "v^4+1");
        assert_eq!(render_terms(&ints(&[(0, -1), (1, 3), (2, -1)])), "-v^2+3*v-1");
        assert_eq!(render_terms(&ints(&[(-2, 2)])), "2*v^-2");
        assert_eq!(render_terms(&[]), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["v^4+1", "-v^2+3*v-1", "2*v^-2", "7", "-3/4*v^2+1/2"] {
            let terms = parse_poly(s).unwrap();
            assert_eq!(render_rational_terms(&terms), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(parse_poly("v^").is_err());
        assert!(parse_poly("3*").is_err());
        assert!(parse_poly("x+1").is_err());
    }
}
