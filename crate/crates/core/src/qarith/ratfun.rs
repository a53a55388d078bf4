//! Rational functions in `v` with a canonical normal form.
//!
//! The denominator is a primitive integer polynomial with positive leading
//! coefficient and nonzero constant term; all rational content and powers of
//! `v` live in the numerator. Two equal rational functions therefore have
//! identical representations.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::intpoly::IntPoly;
use super::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("division by the zero rational function")]
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentPoly::from_int(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        RatFun {
            num,
            den: LaurentPoly::one(),
        }
    }

    /// Build and normalize `num / den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let Some((cn, sn, pn)) = num.to_primitive() else {
            return Self::zero();
        };
        let (cd, sd, pd) = den.to_primitive().expect("nonzero denominator");
        let g = pn.gcd(&pd);
        let (pn, pd) = if g.degree() == Some(0) {
            (pn, pd)
        } else {
            (
                pn.div_exact(&g).expect("gcd divides numerator"),
                pd.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        RatFun {
            num: LaurentPoly::from_intpoly(&pn, sn - sd).scale(&(cn / cd)),
            den: LaurentPoly::from_intpoly(&pd, 0),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// Denominator as an integer polynomial (always integral by construction).
    pub fn den_poly(&self) -> IntPoly {
        self.den
            .to_primitive()
            .map(|(_, _, p)| p)
            .unwrap_or_else(IntPoly::one)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn arith(&self, other: &RatFun, op: RatOp) -> Result<RatFun, RatFunError> {
        Ok(match op {
            RatOp::Add => self.add(other),
            RatOp::Sub => self.sub(other),
            RatOp::Mul => self.mul(other),
            RatOp::Div => self.div(other)?,
        })
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, RatFunError> {
        if other.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<RatFun, RatFunError> {
        RatFun::one().div(self)
    }

    pub fn scale(&self, c: &BigRational) -> RatFun {
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .renormalize_zero()
    }

    fn renormalize_zero(self) -> RatFun {
        if self.num.is_zero() {
            RatFun::zero()
        } else {
            self
        }
    }

    /// Exact value at a rational point; `None` at a pole.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x)? / d)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }

    /// Value at `v = 1` when the denominator does not vanish there.
    pub fn at_one(&self) -> Option<BigRational> {
        self.eval_rational(&BigRational::one())
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<LaurentPoly> for RatFun {
    fn from(p: LaurentPoly) -> Self {
        RatFun::from_laurent(p)
    }
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        RatFun::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::laurent::qbracket;

    fn br(n: i64) -> RatFun {
        RatFun::from_laurent(qbracket(n))
    }

    #[test]
    fn spec_examples() {
        assert_eq!(RatFun::one().arith(&RatFun::one(), RatOp::Add).unwrap(), RatFun::from_int(2));
        assert_eq!(br(2).arith(&br(2), RatOp::Div).unwrap(), RatFun::one());
        let three_over_one = br(3).div(&br(1)).unwrap();
        let expected = LaurentPoly::from_terms([
            (4, BigRational::one()),
            (0, BigRational::one()),
            (-4, BigRational::one()),
        ]);
        assert_eq!(three_over_one.mul(&br(1)), RatFun::from_laurent(expected));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(br(2).div(&RatFun::zero()), Err(RatFunError::DivisionByZero));
        assert_eq!(
            RatFun::new(LaurentPoly::one(), LaurentPoly::zero()),
            Err(RatFunError::DivisionByZero)
        );
    }

    #[test]
    fn normal_form_is_canonical() {
        // [4]/[2] = q^2 + q^-2 regardless of how it is assembled
        let a = br(4).div(&br(2)).unwrap();
        let b = br(4).mul(&br(3)).div(&br(2).mul(&br(3))).unwrap();
        assert_eq!(a, b);
        assert!(a.is_laurent());
        // denominators carry no powers of v and positive leading coefficient
        let c = RatFun::from_int(1).div(&RatFun::from_laurent(qbracket(-2))).unwrap();
        assert_eq!(c.den().min_exp(), Some(0));
        assert!(c.den().lead().unwrap() > &BigRational::zero());
    }
}
