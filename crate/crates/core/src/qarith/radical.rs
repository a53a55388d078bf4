//! Formal radical scalars `sum_k c_k * sqrt(F_k)`.
//!
//! Each key `F` is a canonical square-free Laurent polynomial, stored split as
//! `t * v^eps * P` with `t` a signed square-free integer, `eps` in `{0, 1}` and
//! `P` a primitive square-free integer polynomial with positive leading
//! coefficient and `P(0) != 0`. Distinct keys are linearly independent over
//! `Q(v)`, so the map representation is canonical and structural equality is
//! value equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intpoly::IntPoly;
use super::laurent::LaurentPoly;
use super::ratfun::RatFun;
use super::squarefree::squarefree_split;
use super::text::{parse_poly_cursor, Cursor, ParseError};

/// Canonical square-free radicand `t * v^eps * P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radicand {
    vodd: bool,
    t: BigInt,
    p: IntPoly,
}

impl Radicand {
    pub fn one() -> Self {
        Radicand {
            vodd: false,
            t: BigInt::one(),
            p: IntPoly::one(),
        }
    }

    /// Assemble from already canonical parts (callers guarantee square-freeness).
    pub(crate) fn from_parts(vodd: bool, t: BigInt, p: IntPoly) -> Self {
        debug_assert!(!t.is_zero());
        Radicand { vodd, t, p }
    }

    pub fn is_one(&self) -> bool {
        !self.vodd && self.t.is_one() && self.p.is_one()
    }

    /// The radicand as a Laurent polynomial.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_intpoly(&self.p, self.vodd as i64).scale(&BigRational::from_integer(self.t.clone()))
    }

    /// `sqrt(self) * sqrt(other) = factor * sqrt(key)`.
    fn mul(&self, other: &Radicand) -> (RatFun, Radicand) {
        let mut factor = LaurentPoly::one();
        if self.vodd && other.vodd {
            factor = LaurentPoly::v_pow(1);
        }
        let g = self.t.abs().gcd(&other.t.abs());
        let t = &self.t * &other.t / (&g * &g);
        let mut c = BigRational::from_integer(g);
        if self.t.is_negative() && other.t.is_negative() {
            c = -c;
        }
        let gp = self.p.gcd(&other.p).primitive_part();
        let p = if gp.degree() == Some(0) {
            &self.p * &other.p
        } else {
            let a = self.p.div_exact(&gp).expect("gcd divides");
            let b = other.p.div_exact(&gp).expect("gcd divides");
            factor = &factor * &LaurentPoly::from_intpoly(&gp, 0);
            &a * &b
        };
        let key = Radicand {
            vodd: self.vodd != other.vodd,
            t,
            p,
        };
        (RatFun::from_laurent(factor.scale(&c)), key)
    }
}

/// Exact scalar `sum c_k sqrt(F_k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    terms: BTreeMap<Radicand, RatFun>,
}

impl RadicalScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ratfun(RatFun::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratfun(RatFun::from_int(n))
    }

    pub fn from_ratfun(c: RatFun) -> Self {
        Self::from_term(Radicand::one(), c)
    }

    pub fn from_term(key: Radicand, c: RatFun) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        RadicalScalar { terms }
    }

    /// Formal square root of a Laurent polynomial, no absolute value taken.
    pub fn sqrt_laurent(f: &LaurentPoly) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        let (sign, s, sf) = squarefree_split(f).expect("nonzero");
        let (c, shift, p) = sf.to_primitive().expect("nonzero");
        // c is a positive square-free integer by construction
        let mut t = c.to_integer();
        if sign < 0 {
            t = -t;
        }
        let key = Radicand {
            vodd: shift == 1,
            t,
            p,
        };
        Self::from_term(key, RatFun::from_laurent(s))
    }

    /// `sign * |R|^{1/2}`. The absolute value flips `R` when its value at
    /// `v = 1` is negative (falling back to the leading coefficient when that
    /// value is zero or a pole).
    pub fn rad_make(r: &RatFun, sign: i8) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let negative = match r.at_one() {
            Some(x) if !x.is_zero() => x.is_negative(),
            _ => r.num().lead().is_some_and(|c| c.is_negative()),
        };
        let n = if negative { -r.num().clone() } else { r.num().clone() };
        // sqrt(N/D) = sqrt(N*D)/D
        let root = Self::sqrt_laurent(&(&n * r.den()));
        let inv_den = RatFun::new(LaurentPoly::one(), r.den().clone()).expect("nonzero denominator");
        let out = root.scale_ratfun(&inv_den);
        if sign < 0 {
            out.neg()
        } else {
            out
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radicand, &RatFun)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational (only the key `1` present).
    pub fn rational_part(&self) -> Option<RatFun> {
        match self.terms.len() {
            0 => Some(RatFun::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, key: Radicand, c: RatFun) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &RadicalScalar) -> RadicalScalar {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RadicalScalar) -> RadicalScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RadicalScalar {
        RadicalScalar {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &RadicalScalar) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let (factor, key) = k1.mul(k2);
                out.add_term(key, c1.mul(c2).mul(&factor));
            }
        }
        out
    }

    pub fn scale_ratfun(&self, c: &RatFun) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x.mul(c));
        }
        out
    }

    /// Parse the textual form produced by `Display`.
    pub fn parse(s: &str) -> Result<RadicalScalar, ParseError> {
        let mut cur = Cursor::new(s);
        let mut out = RadicalScalar::zero();
        if cur.eat('0') {
            if !cur.at_end() {
                return Err(cur.unexpected());
            }
            return Ok(out);
        }
        loop {
            let term = parse_term(&mut cur)?;
            out = out.add(&term);
            if cur.at_end() {
                break;
            }
            cur.expect('+')?;
        }
        Ok(out)
    }
}

fn poly_of(terms: Vec<(i64, BigRational)>) -> LaurentPoly {
    LaurentPoly::from_terms(terms)
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<RadicalScalar, ParseError> {
    cur.expect('(')?;
    let neg = cur.eat('-');
    let mut c = cur.unsigned_rational()?;
    if neg {
        c = -c;
    }
    cur.expect(')')?;
    let mut num = LaurentPoly::constant(c);
    let mut den = LaurentPoly::one();
    loop {
        cur.skip_ws();
        if cur.rest().starts_with("*sqrt") || cur.rest().starts_with("* sqrt") {
            break;
        }
        if cur.eat('*') {
            cur.expect('(')?;
            num = &num * &poly_of(parse_poly_cursor(cur)?);
            cur.expect(')')?;
        } else if cur.eat('/') {
            cur.expect('(')?;
            den = &den * &poly_of(parse_poly_cursor(cur)?);
            cur.expect(')')?;
        } else {
            return Err(cur.unexpected());
        }
    }
    cur.expect('*')?;
    cur.skip_ws();
    if !cur.rest().starts_with("sqrt") {
        return Err(cur.unexpected());
    }
    cur.pos += 4;
    cur.expect('{')?;
    let f = poly_of(parse_poly_cursor(cur)?);
    cur.expect('}')?;
    let coeff = RatFun::new(num, den).map_err(|e| ParseError::Invalid(e.to_string()))?;
    if f.is_zero() {
        return Err(ParseError::Invalid("zero radicand".into()));
    }
    Ok(RadicalScalar::sqrt_laurent(&f).scale_ratfun(&coeff))
}

fn render_int_laurent(p: &LaurentPoly) -> String {
    p.to_string()
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let (content, shift, prim) = c.num().to_primitive().expect("nonzero coefficient");
            write!(f, "({content})")?;
            let n = LaurentPoly::from_intpoly(&prim, shift);
            if !n.is_one() {
                write!(f, "*({})", render_int_laurent(&n))?;
            }
            if !c.den().is_one() {
                write!(f, "/({})", render_int_laurent(c.den()))?;
            }
            write!(f, "*sqrt{{{}}}", render_int_laurent(&key.to_laurent()))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for RadicalScalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadicalScalar::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::laurent::qbracket;

    fn br(n: i64) -> LaurentPoly {
        qbracket(n)
    }

    #[test]
    fn rad_make_examples() {
        assert!(RadicalScalar::rad_make(&RatFun::zero(), 1).is_zero());
        let one = RatFun::from_laurent(&br(1) * &br(1));
        assert_eq!(RadicalScalar::rad_make(&one, 1), RadicalScalar::one());
        assert_eq!(RadicalScalar::rad_make(&one, 1).to_string(), "(1)*sqrt{1}");
        // sqrt([2]^2 [3]) with sign -1 is -[2] sqrt(sqfree part of [3])
        let r = RatFun::from_laurent(&(&br(2) * &br(2)) * &br(3));
        let x = RadicalScalar::rad_make(&r, -1);
        let (_, s3, f3) = squarefree_split(&br(3)).unwrap();
        let expected = RadicalScalar::sqrt_laurent(&f3)
            .scale_ratfun(&RatFun::from_laurent(&br(2) * &s3))
            .neg();
        assert_eq!(x, expected);
        // the square recovers the radicand
        assert_eq!(x.mul(&x), RadicalScalar::from_ratfun(r));
    }

    #[test]
    fn absolute_value_from_classical_limit() {
        let r = RatFun::from_laurent(&br(-2) * &br(3));
        let x = RadicalScalar::rad_make(&r, 1);
        assert_eq!(x.mul(&x), RadicalScalar::from_ratfun(r.neg()));
    }

    #[test]
    fn ring_examples() {
        let f = RadicalScalar::sqrt_laurent(&br(2));
        assert!(f.add(&f.neg()).is_zero());
        assert_eq!(f.mul(&f), RadicalScalar::from_ratfun(RatFun::from_laurent(br(2))));
        // sqrt([2][3]) sqrt([3][4]) = [3] sqrt([2][4])
        let a = RadicalScalar::sqrt_laurent(&(&br(2) * &br(3)));
        let b = RadicalScalar::sqrt_laurent(&(&br(3) * &br(4)));
        let c = RadicalScalar::sqrt_laurent(&(&br(2) * &br(4)))
            .scale_ratfun(&RatFun::from_laurent(br(3)));
        assert_eq!(a.mul(&b), c);
    }

    #[test]
    fn negative_radicands_square_correctly() {
        let m = RadicalScalar::sqrt_laurent(&LaurentPoly::from_int(-2));
        assert_eq!(m.mul(&m), RadicalScalar::from_int(-2));
        let v = RadicalScalar::sqrt_laurent(&LaurentPoly::v_pow(1));
        assert_eq!(
            v.mul(&v),
            RadicalScalar::from_ratfun(RatFun::from_laurent(LaurentPoly::v_pow(1)))
        );
    }

    #[test]
    fn text_roundtrip() {
        let samples = [
            RadicalScalar::one(),
            RadicalScalar::zero(),
            RadicalScalar::rad_make(&RatFun::from_laurent(&br(2) * &br(5)), -1),
            RadicalScalar::rad_make(&RatFun::new(br(3), br(2)).unwrap(), 1)
                .add(&RadicalScalar::from_ratfun(RatFun::new(br(4), br(3)).unwrap())),
        ];
        for x in samples {
            let s = x.to_string();
            assert_eq!(RadicalScalar::parse(&s).unwrap(), x, "{s}");
        }
        let y = RadicalScalar::parse("(-1)*(v^2-1)/(v^2+1)*sqrt{v^4+1}").unwrap();
        assert_eq!(y.to_string(), "(-1)*(v^2-1)/(v^2+1)*sqrt{v^4+1}");
        assert!(RadicalScalar::parse("(1)*sqrt{0}").is_err());
        assert!(RadicalScalar::parse("(1)*sqr{1}").is_err());
    }
}
