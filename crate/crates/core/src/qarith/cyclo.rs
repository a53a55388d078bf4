//! Exact radical scalars in factored cyclotomic form.
//!
//! Every q-bracket of an integer factors over cyclotomic polynomials in
//! `x = v^4 = q^2`:
//!
//!   [n] = sign(n) * v^{-2(|n|-1)} * prod_{d | |n|, d > 1} Phi_d(v^4).
//!
//! Matrix elements of the module are square roots of ratios of such brackets,
//! so each of them is a single monomial `c * v^{a/2} * prod Phi_d(v^4)^{e_d/2}`.
//! [`CycloScalar`] is a finite sum of such monomials with rational scales. Sums
//! are kept unexpanded; equality to zero is decided rigorously by grouping the
//! monomials by their square-free radical class (distinct classes are linearly
//! independent over Q(v)) and then testing the resulting integer polynomial
//! for vanishing modulo enough large primes, at more points than its degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::intpoly::{log2_bigint, IntPoly};
use super::laurent::LaurentPoly;
use super::modp;
use super::radical::{Radicand, RadicalScalar};
use super::ratfun::RatFun;

/// Cached data about the atom `Phi_d(v^4)`.
#[derive(Debug)]
pub struct Atom {
    pub d: u32,
    /// `Phi_d(x)`.
    pub phi: IntPoly,
    /// `Phi_d(v^4)` as a polynomial in `v`.
    pub poly_v: IntPoly,
    /// `log2` of the L1 norm (same for `Phi_d(x)` and `Phi_d(v^4)`).
    pub log2_l1: f64,
    /// `Phi_d(1)`: `p` when `d` is a power of the prime `p`, else 1.
    pub at_one: i64,
}

fn atom_cache() -> &'static RwLock<HashMap<u32, Arc<Atom>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Atom>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The cyclotomic polynomial `Phi_d(x)` for `d >= 1`.
pub fn cyclotomic(d: u32) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    atom(d).phi.clone()
}

/// Shared, lazily computed data for `Phi_d(v^4)`.
pub fn atom(d: u32) -> Arc<Atom> {
    if let Some(a) = atom_cache().read().expect("atom cache").get(&d) {
        return a.clone();
    }
    // x^d - 1 divided by all proper-divisor cyclotomics
    let mut num = IntPoly::monomial(BigInt::one(), d as usize);
    num = &num - &IntPoly::one();
    for e in divisors(d as u64) {
        if e as u32 != d {
            num = num
                .div_exact(&atom(e as u32).phi)
                .expect("cyclotomic divides x^d - 1");
        }
    }
    let phi = num;
    let poly_v = phi.expand(4);
    let at_one = phi
        .eval_bigint(&BigInt::one())
        .to_i64()
        .expect("small value at one");
    let a = Arc::new(Atom {
        d,
        log2_l1: phi.log2_l1(),
        phi,
        poly_v,
        at_one,
    });
    atom_cache()
        .write()
        .expect("atom cache")
        .entry(d)
        .or_insert(a)
        .clone()
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// A monomial `v^{vpow2/2} * prod Phi_d(v^4)^{e/2}` (doubled exponents).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono {
    pub vpow2: i64,
    /// Sorted by `d`, no zero exponents.
    pub exps: Vec<(u32, i32)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            match (self.exps.get(i), other.exps.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    if ea + eb != 0 {
                        exps.push((a, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    exps.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    exps.push((b, eb));
                    j += 1;
                }
                (Some(&x), None) => {
                    exps.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    exps.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Mono {
            vpow2: self.vpow2 + other.vpow2,
            exps,
        }
    }

    pub fn inverse(&self) -> Mono {
        Mono {
            vpow2: -self.vpow2,
            exps: self.exps.iter().map(|&(d, e)| (d, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            vpow2: self.vpow2 * k as i64,
            exps: self.exps.iter().map(|&(d, e)| (d, e * k)).collect(),
        }
    }

    /// The square-free radical class: parity of the `v` power and the atoms
    /// carrying an odd doubled exponent.
    pub fn class(&self) -> (bool, Vec<u32>) {
        (
            self.vpow2.rem_euclid(2) == 1,
            self.exps
                .iter()
                .filter(|(_, e)| e.rem_euclid(2) == 1)
                .map(|(d, _)| *d)
                .collect(),
        )
    }

    /// True when all exponents are even, i.e. the monomial is rational in `v`.
    pub fn is_rational(&self) -> bool {
        self.vpow2 % 2 == 0 && self.exps.iter().all(|(_, e)| e % 2 == 0)
    }

    /// Monomial of `prod [n]^{sign}` with doubled exponents *2* (i.e. the
    /// monomial of the bracket product itself, not of its square root), plus the
    /// product of the bracket signs. `None` when some bracket argument is zero.
    fn of_brackets(num: &[i64], den: &[i64]) -> Option<(Mono, i8)> {
        let mut sign = 1i8;
        let mut vpow = 0i64;
        let mut exps: BTreeMap<u32, i32> = BTreeMap::new();
        for (args, s) in [(num, 1i32), (den, -1i32)] {
            for &n in args {
                if n == 0 {
                    return None;
                }
                if n < 0 {
                    sign = -sign;
                }
                let m = n.unsigned_abs();
                vpow += s as i64 * (-2 * (m as i64 - 1));
                for d in divisors(m) {
                    if d > 1 {
                        *exps.entry(d as u32).or_insert(0) += s;
                    }
                }
            }
        }
        Some((
            Mono {
                vpow2: vpow,
                exps: exps.into_iter().filter(|(_, e)| *e != 0).collect(),
            },
            sign,
        ))
    }
}

/// Exact scalar: a finite sum of monomials with rational scales.
#[derive(Clone, Debug, Default)]
pub struct CycloScalar {
    terms: BTreeMap<Mono, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("q-bracket of zero in a denominator")]
    ZeroDenominator,
    #[error("division by a sum of {0} monomials is not supported in factored form")]
    NonMonomialDivisor(usize),
}

impl CycloScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_mono(Mono::one(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_mono(Mono::one(), c)
    }

    pub fn from_mono(m: Mono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CycloScalar { terms }
    }

    /// `v^k`
    pub fn v_pow(k: i64) -> Self {
        Self::from_mono(
            Mono {
                vpow2: 2 * k,
                exps: vec![],
            },
            BigRational::one(),
        )
    }

    /// `q = v^2`
    pub fn q() -> Self {
        Self::v_pow(2)
    }

    /// The q-bracket `[n]`.
    pub fn qbracket(n: i64) -> Self {
        match Mono::of_brackets(&[n], &[]) {
            None => Self::zero(),
            Some((m, sign)) => Self::from_mono(m.pow(2), BigRational::from_integer(sign.into())),
        }
    }

    /// `prod [num] / prod [den]` exactly (with sign).
    pub fn bracket_ratio(num: &[i64], den: &[i64]) -> Result<Self, CycloError> {
        if den.contains(&0) {
            return Err(CycloError::ZeroDenominator);
        }
        Ok(match Mono::of_brackets(num, den) {
            None => Self::zero(),
            Some((m, sign)) => Self::from_mono(m.pow(2), BigRational::from_integer(sign.into())),
        })
    }

    /// `|prod [num] / prod [den]|^{1/2}`, the shape of every matrix element.
    ///
    /// The absolute value is taken at the level of the sign of the integer
    /// arguments: every `Phi_d(v^4)` with `d >= 2` is positive for real `v > 0`,
    /// so the sign of the bracket product equals the sign of its classical
    /// limit.
    pub fn sqrt_abs_ratio(num: &[i64], den: &[i64]) -> Result<Self, CycloError> {
        if den.contains(&0) {
            return Err(CycloError::ZeroDenominator);
        }
        Ok(match Mono::of_brackets(num, den) {
            None => Self::zero(),
            Some((m, _sign)) => Self::from_mono(m, BigRational::one()),
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Structurally empty (cheap; see [`CycloScalar::is_zero`] for the exact test).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single(&self) -> Option<(&Mono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &CycloScalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &CycloScalar, c: &CycloScalar) {
        for (m1, c1) in &other.terms {
            for (m2, c2) in &c.terms {
                self.add_term(m1.mul(m2), c1 * c2);
            }
        }
    }

    pub fn add(&self, other: &CycloScalar) -> CycloScalar {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &CycloScalar) -> CycloScalar {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> CycloScalar {
        CycloScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &CycloScalar) -> CycloScalar {
        let mut out = CycloScalar::zero();
        out.add_scaled(self, other);
        out
    }

    pub fn scale(&self, c: &BigRational) -> CycloScalar {
        if c.is_zero() {
            return CycloScalar::zero();
        }
        CycloScalar {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplicative inverse of a single monomial.
    pub fn inverse(&self) -> Result<CycloScalar, CycloError> {
        match self.single() {
            Some((m, c)) => Ok(Self::from_mono(m.inverse(), c.recip())),
            None if self.terms.is_empty() => Err(CycloError::ZeroDenominator),
            None => Err(CycloError::NonMonomialDivisor(self.terms.len())),
        }
    }

    pub fn div(&self, other: &CycloScalar) -> Result<CycloScalar, CycloError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, k: i64) -> Result<CycloScalar, CycloError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = CycloScalar::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Exact equality.
    pub fn eq_exact(&self, other: &CycloScalar) -> bool {
        self.sub(other).is_zero()
    }

    /// Rigorous zero test.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let mut classes: BTreeMap<(bool, Vec<u32>), Vec<(&Mono, &BigRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            classes.entry(m.class()).or_default().push((m, c));
        }
        classes
            .iter()
            .all(|((vodd, odd), terms)| class_is_zero(*vodd, odd, terms))
    }

    /// Numeric value. Each atom uses the principal square root of its own
    /// value, which makes evaluation a ring homomorphism.
    pub fn eval(&self, v0: Complex64) -> Complex64 {
        let mut atoms: HashMap<u32, Complex64> = HashMap::new();
        let x4 = v0.powi(4);
        let sv = v0.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0) * sv.powi(m.vpow2 as i32);
            for &(d, e) in &m.exps {
                let r = *atoms
                    .entry(d)
                    .or_insert_with(|| atom(d).phi.eval_complex(x4).sqrt());
                t *= r.powi(e);
            }
            acc += t;
        }
        acc
    }

    /// Exact value of the square of a single-monomial scalar at `v = 1`.
    pub fn square_at_one(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        let (m, c) = self.single()?;
        let mut acc = c * c;
        for &(d, e) in &m.exps {
            let base = BigRational::from_integer(atom(d).at_one.into());
            acc *= crate::qarith::laurent::pow_rational(&base, e as i64);
        }
        Some(acc)
    }

    /// Convert to the generic radical representation.
    pub fn to_radical(&self) -> RadicalScalar {
        let mut classes: BTreeMap<(bool, Vec<u32>), Vec<(&Mono, &BigRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            classes.entry(m.class()).or_default().push((m, c));
        }
        let mut out = RadicalScalar::zero();
        for ((vodd, odd), terms) in classes {
            let mut key_poly = IntPoly::one();
            for &d in &odd {
                key_poly = &key_poly * &atom(d).poly_v;
            }
            let key = Radicand::from_parts(vodd, BigInt::one(), key_poly);
            let mut coeff = RatFun::zero();
            for (m, c) in terms {
                let mut num = LaurentPoly::v_pow((m.vpow2 - vodd as i64).div_euclid(2));
                let mut den = LaurentPoly::one();
                for &(d, e) in &m.exps {
                    let half = (e - odd.contains(&d) as i32).div_euclid(2);
                    let p = LaurentPoly::from_intpoly(&atom(d).poly_v, 0);
                    if half > 0 {
                        num = &num * &p.pow(half as u32);
                    } else if half < 0 {
                        den = &den * &p.pow((-half) as u32);
                    }
                }
                let term = RatFun::new(num.scale(c), den).expect("nonzero denominator");
                coeff = coeff.add(&term);
            }
            out = out.add(&RadicalScalar::from_term(key, coeff));
        }
        out
    }

    /// The value as a rational function when no square roots remain.
    pub fn to_ratfun(&self) -> Option<RatFun> {
        let r = self.to_radical();
        r.rational_part()
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_radical())
    }
}

/// Zero test of one radical class. All monomials share the same odd atoms, so
/// dividing by the class radical leaves integer exponents.
fn class_is_zero(vodd: bool, odd: &[u32], terms: &[(&Mono, &BigRational)]) -> bool {
    if terms.len() == 1 {
        return false;
    }
    // integer exponents after removing the class radical
    let int_terms: Vec<(i64, BTreeMap<u32, i64>)> = terms
        .iter()
        .map(|(m, _)| {
            let v = (m.vpow2 - vodd as i64) / 2;
            let ex = m
                .exps
                .iter()
                .map(|&(d, e)| (d, ((e - odd.contains(&d) as i32) / 2) as i64))
                .collect();
            (v, ex)
        })
        .collect();
    let mut all_atoms: Vec<u32> = int_terms
        .iter()
        .flat_map(|(_, ex)| ex.keys().copied())
        .collect();
    all_atoms.sort_unstable();
    all_atoms.dedup();
    let vmin = int_terms.iter().map(|(v, _)| *v).min().unwrap();
    let mins: Vec<i64> = all_atoms
        .iter()
        .map(|d| {
            int_terms
                .iter()
                .map(|(_, ex)| ex.get(d).copied().unwrap_or(0))
                .min()
                .unwrap()
        })
        .collect();
    let atoms: Vec<Arc<Atom>> = all_atoms.iter().map(|&d| atom(d)).collect();
    // residual nonnegative exponents
    let residual: Vec<(u64, Vec<u64>)> = int_terms
        .iter()
        .map(|(v, ex)| {
            (
                (v - vmin) as u64,
                all_atoms
                    .iter()
                    .zip(&mins)
                    .map(|(d, mn)| (ex.get(d).copied().unwrap_or(0) - mn) as u64)
                    .collect(),
            )
        })
        .collect();
    let degree: u64 = residual
        .iter()
        .map(|(rv, rs)| {
            rv + rs
                .iter()
                .zip(&atoms)
                .map(|(r, a)| r * a.poly_v.degree().unwrap() as u64)
                .sum::<u64>()
        })
        .max()
        .unwrap();
    // integer scales
    let mut lcm = BigInt::one();
    for (_, c) in terms {
        lcm = lcm.lcm(c.denom());
    }
    let scales: Vec<BigInt> = terms
        .iter()
        .map(|(_, c)| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut bound_bits = f64::NEG_INFINITY;
    for (s, (_, rs)) in scales.iter().zip(&residual) {
        let b = log2_bigint(s)
            + rs.iter()
                .zip(&atoms)
                .map(|(r, a)| *r as f64 * a.log2_l1)
                .sum::<f64>();
        bound_bits = bound_bits.max(b);
    }
    bound_bits += (terms.len() as f64).log2() + 2.0;

    let mut covered = 0.0f64;
    for &p in modp::prime_pool() {
        let s_mod: Vec<u64> = scales.iter().map(|s| modp::bigint_mod(s, p)).collect();
        for x in 2..=degree + 2 {
            let x4 = modp::pow_mod(x, 4, p);
            let atom_vals: Vec<u64> = atoms.iter().map(|a| a.phi.eval_mod(x4, p)).collect();
            let mut acc = 0u64;
            for ((rv, rs), s) in residual.iter().zip(&s_mod) {
                let mut t = modp::mul_mod(*s, modp::pow_mod(x, *rv, p), p);
                for (r, av) in rs.iter().zip(&atom_vals) {
                    if *r > 0 {
                        t = modp::mul_mod(t, modp::pow_mod(*av, *r, p), p);
                    }
                }
                acc = modp::add_mod(acc, t, p);
            }
            if acc != 0 {
                return false;
            }
        }
        covered += (p as f64).log2();
        if covered > bound_bits {
            return true;
        }
    }
    panic!("coefficient bound of {bound_bits} bits exceeds the prime pool");
}

/// Log-scale magnitude helper used in diagnostics.
pub fn log2_abs(c: &BigRational) -> f64 {
    log2_bigint(c.numer()) - log2_bigint(c.denom())
}

impl PartialEq<i64> for CycloScalar {
    fn eq(&self, other: &i64) -> bool {
        self.eq_exact(&CycloScalar::from_int(*other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::laurent::qbracket;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64s(&[1, 1]));
        assert_eq!(cyclotomic(3), IntPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(atom(8).at_one, 2);
        assert_eq!(atom(9).at_one, 3);
        assert_eq!(atom(6).at_one, 1);
    }

    #[test]
    fn bracket_matches_laurent_expansion() {
        for n in -13..=13 {
            let c = CycloScalar::qbracket(n);
            let r = c.to_ratfun().unwrap();
            assert_eq!(r, RatFun::from_laurent(qbracket(n)), "n = {n}");
        }
    }

    #[test]
    fn bracket_recurrence_is_zero() {
        for a in -15..=15 {
            let lhs = CycloScalar::qbracket(a - 1)
                .sub(&CycloScalar::qbracket(2).mul(&CycloScalar::qbracket(a)))
                .add(&CycloScalar::qbracket(a + 1));
            assert!(lhs.is_zero(), "a = {a}");
        }
    }

    #[test]
    fn nonzero_detected() {
        let x = CycloScalar::qbracket(3).sub(&CycloScalar::qbracket(2));
        assert!(!x.is_zero());
        // [2]^2 - [3] = 1
        let y = CycloScalar::qbracket(2)
            .mul(&CycloScalar::qbracket(2))
            .sub(&CycloScalar::qbracket(3));
        assert!(y.eq_exact(&CycloScalar::one()));
    }

    #[test]
    fn radicals_of_distinct_classes_do_not_cancel() {
        let a = CycloScalar::sqrt_abs_ratio(&[2], &[]).unwrap();
        let b = CycloScalar::sqrt_abs_ratio(&[3], &[]).unwrap();
        assert!(!a.sub(&b).is_zero());
        assert!(a.mul(&a).eq_exact(&CycloScalar::qbracket(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            CycloScalar::sqrt_abs_ratio(&[1], &[0]).unwrap_err(),
            CycloError::ZeroDenominator
        );
        assert!(CycloScalar::sqrt_abs_ratio(&[0], &[1]).unwrap().is_empty());
    }

    #[test]
    fn evaluation_matches_formula() {
        let q: f64 = 1.1f64 * 1.1;
        for n in 1..10 {
            let expected = (q.powi(n as i32) - q.powi(-(n as i32))) / (q - 1.0 / q);
            let got = CycloScalar::qbracket(n).eval(Complex64::new(1.1, 0.0));
            assert!((got.re - expected).abs() < 1e-9 * expected.abs());
        }
    }

    #[test]
    fn square_at_one_is_classical() {
        let x = CycloScalar::sqrt_abs_ratio(&[6, -4], &[3]).unwrap();
        assert_eq!(x.square_at_one().unwrap(), BigRational::from_integer(8.into()));
    }
}
