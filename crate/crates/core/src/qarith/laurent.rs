//! Laurent polynomials in `v = q^{1/2}` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::intpoly::IntPoly;

/// Finitely supported map from exponent of `v` to a nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    /// `v^k`
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(it: I) -> Self {
        let mut out = LaurentPoly::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// Embed `v^shift * p(v)`.
    pub fn from_intpoly(p: &IntPoly, shift: i64) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 + shift, BigRational::from_integer(c.clone()))),
        )
    }

    fn add_term(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Decompose a nonzero Laurent polynomial as `c * v^s * P(v)` where `P` is a
    /// primitive integer polynomial with positive leading coefficient and
    /// `P(0) != 0`. Returns `None` for zero.
    pub fn to_primitive(&self) -> Option<(BigRational, i64, IntPoly)> {
        let lo = self.min_exp()?;
        let hi = self.max_exp()?;
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (k, c) in &self.terms {
            coeffs[(k - lo) as usize] = c.numer() * (&den_lcm / c.denom());
        }
        let raw = IntPoly::from_coeffs(coeffs);
        let prim = raw.primitive_part();
        let lead_raw = raw.lead().unwrap().clone();
        let lead_prim = prim.lead().unwrap().clone();
        let content = BigRational::new(lead_raw, lead_prim * den_lcm);
        Some((content, lo, prim))
    }

    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        if x.is_zero() && self.min_exp().is_some_and(|k| k < 0) {
            return None;
        }
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            acc += c * pow_rational(x, *k);
        }
        Some(acc)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            acc += x.powi(*k as i32) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Value at `v = 1`, i.e. the sum of coefficients.
    pub fn at_one(&self) -> BigRational {
        self.terms.values().cloned().sum()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

pub(crate) fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

/// The q-number `[n] = (q^n - q^-n)/(q - q^-1)` as a Laurent polynomial in `v`.
///
/// For `n > 0` this is `q^{n-1} + q^{n-3} + ... + q^{1-n}`, i.e. every exponent of
/// `v` is even. The bracket is odd in `n`.
pub fn qbracket(n: i64) -> LaurentPoly {
    let m = n.abs();
    let sign = if n < 0 { -1 } else { 1 };
    LaurentPoly::from_terms(
        (0..m).map(|j| (2 * (m - 1 - 2 * j), BigRational::from_integer(sign.into()))),
    )
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigRational)> =
            self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        f.write_str(&super::text::render_rational_terms(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn bracket_small_values() {
        assert!(qbracket(0).is_zero());
        assert!(qbracket(1).is_one());
        // [2] = q + q^-1 = v^2 + v^-2
        assert_eq!(qbracket(2), LaurentPoly::from_terms([(2, r(1)), (-2, r(1))]));
        // [-3] = -(q^2 + 1 + q^-2)
        assert_eq!(
            qbracket(-3),
            LaurentPoly::from_terms([(4, r(-1)), (0, r(-1)), (-4, r(-1))])
        );
    }

    #[test]
    fn bracket_classical_limit() {
        for n in -20..=20 {
            assert_eq!(qbracket(n).at_one(), r(n));
        }
    }

    #[test]
    fn primitive_decomposition_roundtrip() {
        let p = LaurentPoly::from_terms([
            (-3, BigRational::new(3.into(), 4.into())),
            (1, BigRational::new((-9).into(), 2.into())),
        ]);
        let (c, s, prim) = p.to_primitive().unwrap();
        assert!(prim.lead().unwrap().is_positive());
        assert_eq!(prim.content(), BigInt::one());
        let back = LaurentPoly::from_intpoly(&prim, s).scale(&c);
        assert_eq!(back, p);
    }
}
