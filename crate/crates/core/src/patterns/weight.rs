//! Exact affine weight values `n + a*mu + b*xi0 + c*xi1`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::pattern::CPattern;
use super::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeightValue {
    pub constant: BigRational,
    pub mu: BigRational,
    pub xi0: BigRational,
    pub xi1: BigRational,
}

impl WeightValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(c: BigRational) -> Self {
        WeightValue {
            constant: c,
            ..Default::default()
        }
    }

    pub fn mu_symbol() -> Self {
        WeightValue {
            mu: BigRational::one(),
            ..Default::default()
        }
    }

    pub fn xi0_symbol() -> Self {
        WeightValue {
            xi0: BigRational::one(),
            ..Default::default()
        }
    }

    pub fn xi1_symbol() -> Self {
        WeightValue {
            xi1: BigRational::one(),
            ..Default::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.is_pure_constant()
    }

    /// No symbolic components.
    pub fn is_pure_constant(&self) -> bool {
        self.mu.is_zero() && self.xi0.is_zero() && self.xi1.is_zero()
    }

    /// The integer value, when the weight is a pure integer constant.
    pub fn as_integer(&self) -> Option<i64> {
        if self.is_pure_constant() && self.constant.is_integer() {
            self.constant.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn scale(&self, k: i64) -> WeightValue {
        let k = BigRational::from_integer(k.into());
        WeightValue {
            constant: &self.constant * &k,
            mu: &self.mu * &k,
            xi0: &self.xi0 * &k,
            xi1: &self.xi1 * &k,
        }
    }
}

impl Add for &WeightValue {
    type Output = WeightValue;
    fn add(self, rhs: &WeightValue) -> WeightValue {
        WeightValue {
            constant: &self.constant + &rhs.constant,
            mu: &self.mu + &rhs.mu,
            xi0: &self.xi0 + &rhs.xi0,
            xi1: &self.xi1 + &rhs.xi1,
        }
    }
}

impl Add for WeightValue {
    type Output = WeightValue;
    fn add(self, rhs: WeightValue) -> WeightValue {
        &self + &rhs
    }
}

impl Sub for &WeightValue {
    type Output = WeightValue;
    fn sub(self, rhs: &WeightValue) -> WeightValue {
        self + &(-rhs.clone())
    }
}

impl Sub for WeightValue {
    type Output = WeightValue;
    fn sub(self, rhs: WeightValue) -> WeightValue {
        &self - &rhs
    }
}

impl Neg for WeightValue {
    type Output = WeightValue;
    fn neg(self) -> WeightValue {
        WeightValue {
            constant: -self.constant,
            mu: -self.mu,
            xi0: -self.xi0,
            xi1: -self.xi1,
        }
    }
}

impl fmt::Display for WeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, name) in [(&self.mu, "mu"), (&self.xi0, "xi0"), (&self.xi1, "xi1")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag.is_one() {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{mag}*{name}"));
            }
        }
        if out.is_empty() {
            out = self.constant.to_string();
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            out.push_str(&format!("{sign}{}", self.constant.abs()));
        }
        f.write_str(&out)
    }
}

impl Serialize for WeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `theta(i) = 1` for `i >= 0`, else 0.
pub fn theta(i: i64) -> i64 {
    (i >= 0) as i64
}

/// Eigenvalue of `h_i` on the pattern: the row-sum difference of rows
/// `2|i| + theta(i)` and `2|i| + theta(i) - 1`, plus `(xi1 - xi0) theta(-i) - xi1`.
pub fn weight(sig: &Signature, p: &CPattern, i: i64) -> WeightValue {
    let r = (2 * i.abs() + theta(i)) as usize;
    let upper = p.row_sum(sig, r);
    let lower = p.row_sum(sig, r - 1);
    // row r carries r copies of mu, so the difference carries exactly one
    let rows = &sig.mu_weight() + &WeightValue::int(upper - lower);
    let xi = &(&sig.xi1() - &sig.xi0()).scale(theta(-i)) - &sig.xi1();
    &rows + &xi
}

/// Eigenvalue of the central element, `xi0 - xi1`, on every pattern.
pub fn central_weight(sig: &Signature) -> WeightValue {
    sig.central_charge()
}

/// Eigenvalue of the gl generator `H_i = h_i + (xi0 - xi1) theta(-i) + xi1`.
pub fn gl_weight(sig: &Signature, p: &CPattern, i: i64) -> WeightValue {
    let shift = &(&sig.xi0() - &sig.xi1()).scale(theta(-i)) + &sig.xi1();
    &weight(sig, p, i) + &shift
}

/// The Cartan bracket argument `h_i - h_{i+1} + (theta(-i) - theta(-i-1)) c`.
pub fn cartan_argument(sig: &Signature, p: &CPattern, i: i64) -> WeightValue {
    let c = central_weight(sig).scale(theta(-i) - theta(-i - 1));
    &(&weight(sig, p, i) - &weight(sig, p, i + 1)) + &c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_integer_view() {
        assert_eq!(WeightValue::int(-1).to_string(), "-1");
        assert_eq!(WeightValue::int(-1).as_integer(), Some(-1));
        let w = &WeightValue::mu_symbol() + &WeightValue::int(2);
        assert_eq!(w.to_string(), "mu+2");
        assert_eq!(w.as_integer(), None);
        let d = &WeightValue::xi0_symbol() - &WeightValue::xi1_symbol();
        assert_eq!(d.to_string(), "xi0-xi1");
        assert!((&w - &w).is_zero());
    }

    #[test]
    fn highest_weight_values() {
        let t = Signature::trivial();
        let hw = CPattern::highest_weight(&t);
        for i in -5..=5 {
            assert!(weight(&t, &hw, i).is_zero());
            assert_eq!(gl_weight(&t, &hw, i), WeightValue::int(0));
        }
        let ls = Signature::levendorskii_soibelman(0);
        let hw = CPattern::highest_weight(&ls);
        assert_eq!(weight(&ls, &hw, 0), WeightValue::int(-1));
        assert_eq!(weight(&ls, &hw, -1), WeightValue::int(0));
        assert_eq!(weight(&ls, &hw, 1), WeightValue::int(0));
        assert_eq!(central_weight(&ls), WeightValue::int(1));
        assert_eq!(gl_weight(&ls, &hw, 0), WeightValue::int(0));
    }

    #[test]
    fn symbolic_parts_cancel_in_cartan_argument() {
        use super::super::signature::{Param, XiParam};
        let sig = Signature::new(-1, 1, vec![2, 1, 0], Param::Symbol, XiParam::Symbol, XiParam::Symbol).unwrap();
        let hw = CPattern::highest_weight(&sig);
        for i in -4..=4 {
            assert!(cartan_argument(&sig, &hw, i).as_integer().is_some(), "i = {i}");
        }
    }
}
