//! Finitely supported module vectors over a pluggable scalar type.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::patterns::CPattern;
use crate::qarith::CycloScalar;

/// Scalars a module vector can carry: exact cyclotomic radicals or complex
/// numbers at a fixed `v`.
pub trait Scalar: Clone + Send + Sync + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Cheap structural zero (used for pruning, never for verdicts).
    fn is_trivially_zero(&self) -> bool;
}

impl Scalar for CycloScalar {
    fn zero() -> Self {
        CycloScalar::zero()
    }
    fn one() -> Self {
        CycloScalar::one()
    }
    fn add_assign(&mut self, other: &Self) {
        CycloScalar::add_assign(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CycloScalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        CycloScalar::neg(self)
    }
    fn is_trivially_zero(&self) -> bool {
        self.is_empty()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_trivially_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// A module vector: pattern -> coefficient, no stored trivial zeros.
#[derive(Clone, Debug)]
pub struct LinComb<S> {
    terms: BTreeMap<CPattern, S>,
}

impl<S: Scalar> Default for LinComb<S> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> LinComb<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: CPattern) -> Self {
        let mut out = Self::zero();
        out.add_term(p, S::one());
        out
    }

    pub fn add_term(&mut self, p: CPattern, c: S) {
        if c.is_trivially_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_trivially_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &LinComb<S>, c: &S) {
        for (p, x) in &other.terms {
            self.add_term(p.clone(), x.mul(c));
        }
    }

    pub fn scale(&self, c: &S) -> LinComb<S> {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &LinComb<S>) -> LinComb<S> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &LinComb<S>) -> LinComb<S> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one().neg());
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CPattern, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &CPattern) -> Option<&S> {
        self.terms.get(p)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinComb<T> {
        let mut out = LinComb::zero();
        for (p, c) in &self.terms {
            out.add_term(p.clone(), f(c));
        }
        out
    }
}

impl LinComb<CycloScalar> {
    /// Rigorous exact zero test.
    pub fn is_zero_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// First pattern with a provably nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(&CPattern, &CycloScalar)> {
        self.terms.iter().find(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, v0: Complex64) -> LinComb<Complex64> {
        self.map(|c| c.eval(v0))
    }
}

impl LinComb<Complex64> {
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("({c}) * {p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Signature;

    #[test]
    fn cancellation_prunes_terms() {
        let sig = Signature::levendorskii_soibelman(0);
        let hw = CPattern::highest_weight(&sig);
        let a: LinComb<CycloScalar> = LinComb::basis(hw.clone());
        let z = a.sub(&a);
        assert!(z.is_empty());
        let two = a.add(&a);
        assert!(two.coeff(&hw).unwrap().eq_exact(&CycloScalar::from_int(2)));
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn numeric_image() {
        let sig = Signature::trivial();
        let hw = CPattern::highest_weight(&sig);
        let a: LinComb<CycloScalar> = LinComb::basis(hw).scale(&CycloScalar::qbracket(2));
        let x = a.eval(Complex64::new(1.0, 0.0));
        assert!((x.max_norm() - 2.0).abs() < 1e-12);
    }
}
