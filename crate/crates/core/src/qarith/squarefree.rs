//! Square-free decomposition (Yun) and the `p = sign * S^2 * F` split.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::intpoly::IntPoly;
use super::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareFreeError {
    #[error("square-free split of the zero polynomial")]
    ZeroInput,
}

/// Yun's algorithm on a primitive polynomial with positive leading coefficient.
///
/// Returns `[(a_1, 1), (a_2, 2), ...]` with `p = prod a_i^i`, each `a_i`
/// square-free, primitive and pairwise coprime. Trivial factors are omitted.
pub fn yun(p: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_exact(&a0).expect("gcd divides p").primitive_part();
    let mut c = dp.div_exact(&a0).expect("gcd divides p'");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d).primitive_part();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        let nb = b.div_exact(&a).expect("gcd divides b");
        c = d.div_exact(&a).expect("gcd divides d");
        b = nb.primitive_part();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// True when `gcd(p, p')` is constant.
pub fn is_squarefree(p: &IntPoly) -> bool {
    p.gcd(&p.derivative()).degree().unwrap_or(0) == 0
}

/// Split a positive integer as `s^2 * f` with `f` square-free, by trial division.
pub fn squarefree_int(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut d = BigUint::from(2u32);
    while &d * &d <= rest {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &d;
        }
        if e % 2 == 1 {
            f *= &d;
        }
        d += 1u32;
    }
    // What remains is 1 or a prime.
    f *= rest;
    (s, f)
}

/// Decompose a nonzero Laurent polynomial as `p = sign * S^2 * F`.
///
/// `F` is square-free in canonical form: `F = t * v^eps * P` with `t` a positive
/// square-free integer, `eps` in `{0, 1}` and `P` primitive with positive
/// leading coefficient and `P(0) != 0`. The monomial `v^k` is split with its
/// even part going to `S` and the odd remainder to `F`.
pub fn squarefree_split(p: &LaurentPoly) -> Result<(i8, LaurentPoly, LaurentPoly), SquareFreeError> {
    let (c, shift, prim) = p.to_primitive().ok_or(SquareFreeError::ZeroInput)?;
    let sign: i8 = if c.is_negative() { -1 } else { 1 };
    let c = c.abs();
    // |c| = a/b = (a*b)/b^2 ; a*b = s^2 f
    let ab = (c.numer() * c.denom()).to_biguint().expect("positive");
    let (s_int, f_int) = squarefree_int(&ab);
    let s_coeff = BigRational::new(BigInt::from(s_int), c.denom().clone());
    let f_coeff = BigRational::from_integer(BigInt::from(f_int));

    let mut s_poly = IntPoly::one();
    let mut f_poly = IntPoly::one();
    for (a, mult) in yun(&prim) {
        for _ in 0..mult / 2 {
            s_poly = &s_poly * &a;
        }
        if mult % 2 == 1 {
            f_poly = &f_poly * &a;
        }
    }
    let half = shift.div_euclid(2);
    let eps = shift.rem_euclid(2);
    let s = LaurentPoly::from_intpoly(&s_poly, half).scale(&s_coeff);
    let f = LaurentPoly::from_intpoly(&f_poly, eps).scale(&f_coeff);
    Ok((sign, s, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::laurent::qbracket;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            terms
                .iter()
                .map(|&(k, c)| (k, BigRational::from_integer(c.into()))),
        )
    }

    #[test]
    fn perfect_square() {
        let base = lp(&[(2, 1), (0, -1)]);
        let p = &base * &base;
        let (sign, s, f) = squarefree_split(&p).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(s, base);
        assert!(f.is_one());
    }

    #[test]
    fn bracket_two() {
        let (sign, s, f) = squarefree_split(&qbracket(2)).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(s, LaurentPoly::v_pow(-1));
        assert_eq!(f, lp(&[(4, 1), (0, 1)]));
    }

    #[test]
    fn bracket_square_times_three() {
        // [2]^2 [3]: the square part is [2] v^-2 and v^8+v^4+1 is already square-free
        let p = &(&qbracket(2) * &qbracket(2)) * &qbracket(3);
        let (sign, s, f) = squarefree_split(&p).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(s, lp(&[(0, 1), (-4, 1)]));
        assert_eq!(f, lp(&[(8, 1), (4, 1), (0, 1)]));
        // independent check: v^8+v^4+1 = (v^4+v^2+1)(v^4-v^2+1), distinct factors
        let a = IntPoly::from_i64s(&[1, 0, 1, 0, 1]);
        let b = IntPoly::from_i64s(&[1, 0, -1, 0, 1]);
        assert_eq!(&a * &b, IntPoly::from_i64s(&[1, 0, 0, 0, 1, 0, 0, 0, 1]));
        assert_eq!(a.gcd(&b), IntPoly::one());
    }

    #[test]
    fn odd_monomial_goes_to_f() {
        let (sign, s, f) = squarefree_split(&lp(&[(3, -8)])).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(s, lp(&[(1, 2)]));
        assert_eq!(f, lp(&[(1, 2)]));
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            squarefree_split(&LaurentPoly::zero()),
            Err(SquareFreeError::ZeroInput)
        );
    }

    #[test]
    fn integer_parts() {
        let (s, f) = squarefree_int(&BigUint::from(360u32)); // 2^3 3^2 5
        assert_eq!(s, BigUint::from(6u32));
        assert_eq!(f, BigUint::from(10u32));
    }
}
