//! Operator words: linear combinations of generator products, applied right
//! to left, with exact or numeric coefficients.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::patterns::{CPattern, WeightValue};
use crate::qarith::CycloScalar;

use super::engine::{ActionError, Engine};
use super::lincomb::{LinComb, Scalar};

/// `v^{sum coef * h_index}`; the weight form must be integer on every pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagExp {
    pub h: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenSymbol {
    E(i64),
    F(i64),
    H(i64),
    C,
    DiagScale(DiagExp),
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSymbol::E(k) => write!(f, "e{k}"),
            GenSymbol::F(k) => write!(f, "f{k}"),
            GenSymbol::H(k) => write!(f, "h{k}"),
            GenSymbol::C => write!(f, "c"),
            GenSymbol::DiagScale(d) => {
                let parts: Vec<String> = d.h.iter().map(|(i, c)| format!("{c}*h{i}")).collect();
                write!(f, "v^({})", parts.join("+"))
            }
        }
    }
}

/// Coefficient field used when applying words.
pub trait Field {
    type S: Scalar;
    fn lift(&self, c: &CycloScalar) -> Self::S;
    fn v_pow(&self, k: i64) -> Self::S;
    fn eigenvalue(&self, w: &WeightValue) -> Result<Self::S, ActionError>;
}

/// Exact arithmetic.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Field for Exact {
    type S = CycloScalar;
    fn lift(&self, c: &CycloScalar) -> CycloScalar {
        c.clone()
    }
    fn v_pow(&self, k: i64) -> CycloScalar {
        CycloScalar::v_pow(k)
    }
    fn eigenvalue(&self, w: &WeightValue) -> Result<CycloScalar, ActionError> {
        if !w.is_pure_constant() {
            return Err(ActionError::SymbolicEigenvalue(w.to_string()));
        }
        Ok(CycloScalar::from_rational(w.constant.clone()))
    }
}

/// Complex arithmetic at a fixed `v`.
#[derive(Clone, Copy, Debug)]
pub struct Numeric {
    pub v0: Complex64,
}

impl Field for Numeric {
    type S = Complex64;
    fn lift(&self, c: &CycloScalar) -> Complex64 {
        c.eval(self.v0)
    }
    fn v_pow(&self, k: i64) -> Complex64 {
        self.v0.powi(k as i32)
    }
    fn eigenvalue(&self, w: &WeightValue) -> Result<Complex64, ActionError> {
        if !w.is_pure_constant() {
            return Err(ActionError::SymbolicEigenvalue(w.to_string()));
        }
        Ok(Complex64::new(w.constant.to_f64().unwrap_or(f64::NAN), 0.0))
    }
}

/// `sum_t coeff_t * (s_1 s_2 ... s_n)`; the rightmost symbol acts first.
#[derive(Clone, Debug, Default)]
pub struct OperatorWord {
    pub terms: Vec<(CycloScalar, Vec<GenSymbol>)>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord {
            terms: vec![(CycloScalar::one(), vec![])],
        }
    }

    pub fn gen(s: GenSymbol) -> Self {
        OperatorWord {
            terms: vec![(CycloScalar::one(), vec![s])],
        }
    }

    /// A single product `s_1 ... s_n`.
    pub fn product(symbols: Vec<GenSymbol>) -> Self {
        OperatorWord {
            terms: vec![(CycloScalar::one(), symbols)],
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        OperatorWord {
            terms: self.terms.iter().map(|(x, w)| (x.mul(c), w.clone())).collect(),
        }
    }

    pub fn add(&self, other: &OperatorWord) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OperatorWord { terms }
    }

    pub fn sub(&self, other: &OperatorWord) -> Self {
        self.add(&other.scale(&CycloScalar::from_int(-1)))
    }

    /// Operator product `self * other`.
    pub fn compose(&self, other: &OperatorWord) -> Self {
        let mut terms = Vec::new();
        for (a, wa) in &self.terms {
            for (b, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().cloned());
                terms.push((a.mul(b), w));
            }
        }
        OperatorWord { terms }
    }

    /// `[x, y]_q = xy - q yx`
    pub fn q_commutator(x: &OperatorWord, y: &OperatorWord) -> Self {
        x.compose(y).sub(&y.compose(x).scale(&CycloScalar::q()))
    }

    pub fn commutator(x: &OperatorWord, y: &OperatorWord) -> Self {
        x.compose(y).sub(&y.compose(x))
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| {
                let syms: Vec<String> = w.iter().map(|s| s.to_string()).collect();
                if *c == 1 {
                    format!("[{}]", syms.join(" "))
                } else {
                    format!("({c})*[{}]", syms.join(" "))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HatKind {
    E,
    F,
}

/// `e_i q^{(h_{i+1} - h_i)/2}` or `f_i q^{(h_i - h_{i+1})/2}`, i.e. the
/// generator after a diagonal `v`-power.
pub fn hat_generator(kind: HatKind, i: i64) -> OperatorWord {
    let (g, exp) = match kind {
        HatKind::E => (GenSymbol::E(i), vec![(i + 1, 1), (i, -1)]),
        HatKind::F => (GenSymbol::F(i), vec![(i, 1), (i + 1, -1)]),
    };
    OperatorWord::product(vec![g, GenSymbol::DiagScale(DiagExp { h: exp })])
}

/// The q-analogue of the Weyl generator `e_{ij}`: `h_i` on the diagonal, hat
/// generators next to it, nested q-commutators further out.
pub fn weyl_generator(i: i64, j: i64) -> OperatorWord {
    if i == j {
        return OperatorWord::gen(GenSymbol::H(i));
    }
    let (lo, hi, kind) = if i < j { (i, j, HatKind::E) } else { (j, i, HatKind::F) };
    let mut acc = hat_generator(kind, hi - 1);
    for t in (lo..hi - 1).rev() {
        acc = OperatorWord::q_commutator(&hat_generator(kind, t), &acc);
    }
    acc
}

fn diag_exponent(eng: &Engine, d: &DiagExp, p: &CPattern) -> Result<i64, ActionError> {
    let mut w = WeightValue::zero();
    for &(i, c) in &d.h {
        w = &w + &eng.apply_h(i, p).scale(c);
    }
    w.as_integer().ok_or_else(|| ActionError::NonIntegerExponent(w.to_string()))
}

/// Apply one generator to a vector.
pub fn apply_symbol<F: Field>(
    eng: &Engine,
    field: &F,
    s: &GenSymbol,
    x: &LinComb<F::S>,
) -> Result<LinComb<F::S>, ActionError> {
    let mut out = LinComb::zero();
    for (p, c) in x.terms() {
        match s {
            GenSymbol::E(k) | GenSymbol::F(k) => {
                let terms = match s {
                    GenSymbol::E(_) => eng.e_terms(*k, p)?,
                    _ => eng.f_terms(*k, p)?,
                };
                for t in terms.iter() {
                    out.add_term(t.target.clone(), field.lift(&t.coeff).mul(c));
                }
            }
            GenSymbol::H(i) => {
                out.add_term(p.clone(), field.eigenvalue(&eng.apply_h(*i, p))?.mul(c));
            }
            GenSymbol::C => {
                out.add_term(p.clone(), field.eigenvalue(&eng.apply_c(p))?.mul(c));
            }
            GenSymbol::DiagScale(d) => {
                out.add_term(p.clone(), field.v_pow(diag_exponent(eng, d, p)?).mul(c));
            }
        }
    }
    Ok(out)
}

/// Apply a word (right to left in every product, linear in the sum).
pub fn apply_word<F: Field>(
    eng: &Engine,
    field: &F,
    w: &OperatorWord,
    x: &LinComb<F::S>,
) -> Result<LinComb<F::S>, ActionError> {
    let mut out = LinComb::zero();
    for (coef, syms) in &w.terms {
        let mut y = x.clone();
        for s in syms.iter().rev() {
            if y.is_empty() {
                break;
            }
            y = apply_symbol(eng, field, s, &y)?;
        }
        out.add_scaled(&y, &field.lift(coef));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Signature;

    #[test]
    fn empty_word_is_identity() {
        let sig = Signature::levendorskii_soibelman(0);
        let eng = Engine::new(sig.clone());
        let x = LinComb::basis(CPattern::highest_weight(&sig));
        let y = apply_word(&eng, &Exact, &OperatorWord::identity(), &x).unwrap();
        assert!(y.sub(&x).is_zero_exact());
    }

    #[test]
    fn hat_f_on_ls_highest_weight() {
        let sig = Signature::levendorskii_soibelman(0);
        let eng = Engine::new(sig.clone());
        let hw = CPattern::highest_weight(&sig);
        let x = LinComb::basis(hw.clone());
        let y = apply_word(&eng, &Exact, &hat_generator(HatKind::F, -1), &x).unwrap();
        let up = hw.shift(&sig, 0, 1, 1).unwrap();
        // h_{-1} - h_0 = 0 - (-1) = 1 on hw
        assert!(y.coeff(&up).unwrap().eq_exact(&CycloScalar::v_pow(1)));
    }

    #[test]
    fn weyl_shapes() {
        assert_eq!(weyl_generator(0, 1).terms.len(), 1);
        assert_eq!(weyl_generator(0, 2).terms.len(), 2);
        assert_eq!(weyl_generator(0, 3).terms.len(), 4);
        assert_eq!(weyl_generator(3, 0).terms.len(), 4);
        assert_eq!(weyl_generator(2, 2).to_string(), "[h2]");
    }

    #[test]
    fn weyl_e02_kills_ls_highest_weight() {
        let sig = Signature::levendorskii_soibelman(0);
        let eng = Engine::new(sig.clone());
        let x = LinComb::basis(CPattern::highest_weight(&sig));
        let y = apply_word(&eng, &Exact, &weyl_generator(0, 2), &x).unwrap();
        assert!(y.is_zero_exact());
    }

    #[test]
    fn symbolic_diag_exponent_is_rejected() {
        use crate::patterns::{Param, XiParam};
        let sig = Signature::new(-1, 0, vec![1, 0], Param::Symbol, XiParam::Symbol, XiParam::Auto).unwrap();
        let eng = Engine::new(sig.clone());
        let x = LinComb::basis(CPattern::highest_weight(&sig));
        // h_1 - h_0 carries the central charge, symbolic here; the scale acts first
        let r = apply_word(&eng, &Exact, &hat_generator(HatKind::E, 0), &x);
        assert!(matches!(r, Err(ActionError::NonIntegerExponent(_))), "{r:?}");
    }
}
