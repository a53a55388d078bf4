//! Floating-point evaluation at a numeric `v0`.
//!
//! Only used for the numeric verification mode and the singular-vector scan;
//! everything else stays exact.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::cyclo::CycloScalar;
use super::laurent::LaurentPoly;
use super::radical::RadicalScalar;
use super::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("pole at sample point v0 = {0}")]
    Pole(Complex64),
}

/// A numeric value plus a flag set when some radicand evaluated to a negative
/// real number (the principal branch is used regardless).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericValue {
    pub value: Complex64,
    pub negative_radicand: bool,
}

impl NumericValue {
    fn plain(value: Complex64) -> Self {
        NumericValue {
            value,
            negative_radicand: false,
        }
    }
}

/// Default sample points: none is a root of unity.
pub fn default_samples() -> Vec<Complex64> {
    vec![
        Complex64::new(1.1, 0.0),
        Complex64::new(0.9, 0.0),
        Complex64::new(1.2, 0.1),
    ]
}

pub trait EvalNumeric {
    fn eval_numeric(&self, v0: Complex64) -> Result<NumericValue, NumericError>;
}

/// Magnitude scale used to decide whether a computed denominator is a pole.
fn l1_at(p: &LaurentPoly, v0: Complex64) -> f64 {
    p.terms()
        .map(|(k, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * v0.norm().powi(k as i32))
        .sum()
}

impl EvalNumeric for LaurentPoly {
    fn eval_numeric(&self, v0: Complex64) -> Result<NumericValue, NumericError> {
        if v0.norm() == 0.0 && self.min_exp().is_some_and(|k| k < 0) {
            return Err(NumericError::Pole(v0));
        }
        Ok(NumericValue::plain(self.eval_complex(v0)))
    }
}

impl EvalNumeric for RatFun {
    fn eval_numeric(&self, v0: Complex64) -> Result<NumericValue, NumericError> {
        let d = self.den().eval_numeric(v0)?.value;
        if d.norm() <= 1e-13 * l1_at(self.den(), v0) {
            return Err(NumericError::Pole(v0));
        }
        Ok(NumericValue::plain(self.num().eval_numeric(v0)?.value / d))
    }
}

impl EvalNumeric for RadicalScalar {
    fn eval_numeric(&self, v0: Complex64) -> Result<NumericValue, NumericError> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut negative = false;
        for (key, c) in self.terms() {
            let r = key.to_laurent().eval_complex(v0);
            if r.im == 0.0 && r.re < 0.0 {
                negative = true;
            }
            acc += c.eval_numeric(v0)?.value * r.sqrt();
        }
        Ok(NumericValue {
            value: acc,
            negative_radicand: negative,
        })
    }
}

impl EvalNumeric for CycloScalar {
    fn eval_numeric(&self, v0: Complex64) -> Result<NumericValue, NumericError> {
        if v0.norm() == 0.0 {
            return Err(NumericError::Pole(v0));
        }
        Ok(NumericValue::plain(self.eval(v0)))
    }
}

/// Relative closeness used by numeric checks.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::laurent::qbracket;

    fn at(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn classical_limit_of_brackets() {
        for n in -9..=9 {
            let got = qbracket(n).eval_numeric(at(1.0)).unwrap().value;
            assert!((got.re - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_one_is_one() {
        let one = RadicalScalar::rad_make(&RatFun::from_laurent(&qbracket(1) * &qbracket(1)), 1);
        for v in default_samples() {
            assert!(close(one.eval_numeric(v).unwrap().value, at(1.0), 1e-14));
        }
    }

    #[test]
    fn pole_reported() {
        // 1/(v^2 - 1) at v = 1
        let r = RatFun::new(LaurentPoly::one(), &LaurentPoly::v_pow(2) - &LaurentPoly::one()).unwrap();
        assert!(matches!(r.eval_numeric(at(1.0)), Err(NumericError::Pole(_))));
    }

    #[test]
    fn negative_radicand_flagged() {
        let x = RadicalScalar::sqrt_laurent(&LaurentPoly::from_int(-3));
        let nv = x.eval_numeric(at(1.1)).unwrap();
        assert!(nv.negative_radicand);
        assert!((nv.value.im - 3f64.sqrt()).abs() < 1e-12);
    }
}
