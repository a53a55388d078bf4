//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order with no trailing zeros, so the
//! zero polynomial is the empty vector. This is the workhorse behind GCDs,
//! square-free decomposition and the canonical radicand keys.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Number of leading zero coefficients at the low end (the `x`-adic valuation).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    /// Divide by `x^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.valuation() || self.is_zero());
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c` (caller guarantees divisibility).
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        self.div_scalar(&g)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `d`: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let lc = d.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let rl = r.lead().unwrap().clone();
            let shift = rd - dd;
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, dc) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= &rl * dc;
            }
            r = IntPoly::from_coeffs(coeffs);
        }
        r
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does not
    /// divide `self` in `Z[x]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = d.lead().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Greatest common divisor, normalized to be primitive times the gcd of the
    /// contents, with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let cont = self.content().gcd(&other.content());
        let stride = gcd_usize(self.stride(), other.stride());
        let (mut a, mut b) = (
            self.compress(stride).primitive_part(),
            other.compress(stride).primitive_part(),
        );
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().expand(stride).scale(&cont)
    }

    fn normalize_sign(&self) -> IntPoly {
        if self.lead().is_some_and(|l| l.is_negative()) {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Largest `g` such that every nonzero coefficient sits at an exponent
    /// divisible by `g` (0 for constants and zero).
    pub fn stride(&self) -> usize {
        let mut g = 0usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && i > 0 {
                g = gcd_usize(g, i);
                if g == 1 {
                    break;
                }
            }
        }
        g
    }

    /// Substitute `x -> x^(1/g)`; valid when `g` divides `stride()`.
    pub fn compress(&self, g: usize) -> IntPoly {
        if g <= 1 {
            return self.clone();
        }
        Self::from_coeffs(self.coeffs.iter().step_by(g).cloned().collect())
    }

    /// Substitute `x -> x^g`.
    pub fn expand(&self, g: usize) -> IntPoly {
        if g <= 1 || self.is_zero() {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * g + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * g] = c.clone();
        }
        IntPoly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = modp::add_mod(modp::mul_mod(acc, x, p), modp::bigint_mod(c, p), p);
        }
        acc
    }

    /// Base-2 logarithm of the sum of absolute coefficient values.
    pub fn log2_l1(&self) -> f64 {
        let s: BigInt = self.coeffs.iter().map(|c| c.abs()).sum();
        log2_bigint(&s)
    }
}

pub fn log2_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        x.abs().to_f64().unwrap().log2()
    } else {
        let shifted: BigInt = x.abs() >> (bits - 64);
        shifted.to_f64().unwrap().log2() + (bits - 64) as f64
    }
}

pub(crate) fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

impl Ord for IntPoly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        IntPoly::from_coeffs(v)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs.clone())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(v)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect();
        f.write_str(&super::text::render_terms(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0, 3]).valuation(), 2);
    }

    #[test]
    fn gcd_of_products() {
        // (x+1)(x-2) and (x+1)(x^2+1)
        let a = &p(&[1, 1]) * &p(&[-2, 1]);
        let b = &p(&[1, 1]) * &p(&[1, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        // contents multiply through
        assert_eq!(a.scale(&BigInt::from(6)).gcd(&b.scale(&BigInt::from(4))), p(&[2, 2]));
    }

    #[test]
    fn gcd_with_stride() {
        // (x^4 + 1)(x^4 - 1) vs (x^4+1)^2, both functions of x^4
        let a = &p(&[1, 0, 0, 0, 1]) * &p(&[-1, 0, 0, 0, 1]);
        let b = p(&[1, 0, 0, 0, 1]).pow(2);
        assert_eq!(a.gcd(&b), p(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = &p(&[3, 1]) * &p(&[-1, 2, 5]);
        assert_eq!(a.div_exact(&p(&[3, 1])), Some(p(&[-1, 2, 5])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[1, 1]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[1, 2, 3, 4]);
        let d = p(&[1, 0, 2]);
        let r = a.pseudo_rem(&d);
        // lc(d)^2 * a = q*d + r, so d divides lc^2*a - r
        let lhs = &a.scale(&BigInt::from(4)) - &r;
        assert!(lhs.div_exact(&d).is_some());
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn evaluation_agrees() {
        let a = p(&[5, -3, 0, 2]);
        assm(a.eval_bigint(&BigInt::from(3)), 5 - 9 + 54);
        let prime = modp::prime_pool()[0];
        assert_eq!(a.eval_mod(3, prime), 50);
        fn assm(x: BigInt, y: i64) {
            assert_eq!(x, BigInt::from(y));
        }
    }
}
