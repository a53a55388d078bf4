//! Matrix elements of `e_k`, `f_k`, `h_k` and `c` on single patterns.
//!
//! Every nonzero matrix element has the shape `sign * |prod [x] / prod [y]|^{1/2}`
//! with integer bracket arguments built from `L`-differences; the base `mu`
//! cancels in each difference, so only integer offsets enter.
//!
//! For `k >= 0` the generators move rows `2k+1`, `2k+2` (neighbours `2k`,
//! `2k+3`); for `k = -K <= -2` rows `2K-2`, `2K-1` (neighbours `2K-3`, `2K`).
//! `k = -1` has a single term moving the apex entry `M_{0,1}`; its direction is
//! fixed by [`Orientation`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::patterns::signature::row_indices;
use crate::patterns::{weight, CPattern, Signature, WeightValue};
use crate::qarith::CycloScalar;

use super::lincomb::LinComb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("zero bracket in a denominator of {gen} on {pattern}")]
    ZeroDenominator { gen: String, pattern: String },
    #[error("diagonal exponent {0} is not an integer")]
    NonIntegerExponent(String),
    #[error("eigenvalue {0} is symbolic and cannot scale an exact vector")]
    SymbolicEigenvalue(String),
    #[error("closed form for f_{k} needs k >= max(1, N/2), pattern needs N = {n}")]
    ClosedFormDomain { k: i64, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Lower,
    Raise,
}

impl Direction {
    fn delta(self) -> i64 {
        match self {
            Direction::Lower => -1,
            Direction::Raise => 1,
        }
    }

    fn opposite(self) -> Direction {
        match self {
            Direction::Lower => Direction::Raise,
            Direction::Raise => Direction::Lower,
        }
    }
}

/// How `e_{-1}` / `f_{-1}` move `M_{0,1}` and which shift `s` enters
/// `[L_{-1,2} - L_{0,1} - s][L_{0,1} - L_{0,2} + s]`. `f_{-1}` always uses
/// the opposite direction and the complementary shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub e_direction: Direction,
    pub e_shift: i64,
}

impl Orientation {
    /// The only candidate compatible with the Cartan relation at index -1.
    pub const RESOLVED: Orientation = Orientation {
        e_direction: Direction::Lower,
        e_shift: 0,
    };

    /// The opposite reading, kept as a negative control.
    pub const FLIPPED: Orientation = Orientation {
        e_direction: Direction::Raise,
        e_shift: 1,
    };

    pub fn candidates() -> [Orientation; 4] {
        let mut out = [Self::RESOLVED; 4];
        let mut n = 0;
        for d in [Direction::Lower, Direction::Raise] {
            for s in [0, 1] {
                out[n] = Orientation {
                    e_direction: d,
                    e_shift: s,
                };
                n += 1;
            }
        }
        out
    }

    fn params(self, raising: bool) -> (Direction, i64) {
        if raising {
            (self.e_direction, self.e_shift)
        } else {
            (self.e_direction.opposite(), 1 - self.e_shift)
        }
    }
}

impl Default for Orientation {
    fn default() -> Self {
        Self::RESOLVED
    }
}

/// One nonzero matrix element together with its bracket arguments
/// (`coeff = sign * |prod [num] / prod [den]|^{1/2}`).
#[derive(Clone, Debug)]
pub struct ActionTerm {
    pub target: CPattern,
    pub coeff: CycloScalar,
    pub num_args: Vec<i64>,
    pub den_args: Vec<i64>,
}

/// `S(j, l; nu)`
fn s_sign(j: i64, l: i64, nu: u8) -> i64 {
    use std::cmp::Ordering::*;
    match j.cmp(&l) {
        Equal => {
            if nu == 0 {
                1
            } else {
                -1
            }
        }
        Less => 1,
        Greater => -1,
    }
}

type CacheKey = (bool, i64, CPattern);

/// Generator actions for one signature, with a per-pattern memo.
pub struct Engine {
    sig: Signature,
    orientation: Orientation,
    cache: Mutex<HashMap<CacheKey, Arc<Vec<ActionTerm>>>>,
    deletions: Mutex<(usize, Option<String>)>,
}

impl Engine {
    pub fn new(sig: Signature) -> Self {
        Self::with_orientation(sig, Orientation::RESOLVED)
    }

    pub fn with_orientation(sig: Signature, orientation: Orientation) -> Self {
        Engine {
            sig,
            orientation,
            cache: Mutex::new(HashMap::new()),
            deletions: Mutex::new((0, None)),
        }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of terms with nonzero numerator deleted because the target
    /// broke betweenness, and the first such case.
    pub fn deletion_notes(&self) -> (usize, Option<String>) {
        self.deletions.lock().unwrap().clone()
    }

    fn note_deletion(&self, what: impl FnOnce() -> String) {
        let mut d = self.deletions.lock().unwrap();
        d.0 += 1;
        if d.1.is_none() {
            d.1 = Some(what());
        }
    }

    /// Every matrix element computed so far, as `(generator, source, terms)`
    /// in a deterministic order.
    pub fn cached_terms(&self) -> Vec<(String, CPattern, Arc<Vec<ActionTerm>>)> {
        let cache = self.cache.lock().unwrap();
        let mut out: Vec<_> = cache
            .iter()
            .map(|((raising, k, p), t)| (format!("{}{k}", if *raising { 'e' } else { 'f' }), p.clone(), t.clone()))
            .collect();
        out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        out
    }

    pub fn e_terms(&self, k: i64, p: &CPattern) -> Result<Arc<Vec<ActionTerm>>, ActionError> {
        self.terms(true, k, p)
    }

    pub fn f_terms(&self, k: i64, p: &CPattern) -> Result<Arc<Vec<ActionTerm>>, ActionError> {
        self.terms(false, k, p)
    }

    fn terms(&self, raising: bool, k: i64, p: &CPattern) -> Result<Arc<Vec<ActionTerm>>, ActionError> {
        let key = (raising, k, p.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let computed = Arc::new(if k == -1 {
            self.apex_terms(raising, p)
        } else {
            self.general_terms(raising, k, p)?
        });
        self.cache.lock().unwrap().insert(key, computed.clone());
        Ok(computed)
    }

    /// `k = -1`: a single shift of `M_{0,1}`.
    fn apex_terms(&self, raising: bool, p: &CPattern) -> Vec<ActionTerm> {
        let sig = &self.sig;
        let (dir, s) = self.orientation.params(raising);
        let l = |i: i64, r: usize| p.l_offset(sig, i, r).expect("index in shape");
        let num = vec![l(-1, 2) - l(0, 1) - s, l(0, 1) - l(0, 2) + s];
        if num.contains(&0) {
            return vec![];
        }
        let Some(target) = p.shift(sig, 0, 1, dir.delta()) else {
            self.note_deletion(|| format!("{}_-1 on {p}", if raising { 'e' } else { 'f' }));
            return vec![];
        };
        let coeff = CycloScalar::sqrt_abs_ratio(&num, &[]).expect("no denominator");
        vec![ActionTerm {
            target,
            coeff,
            num_args: num,
            den_args: vec![],
        }]
    }

    fn general_terms(&self, raising: bool, k: i64, p: &CPattern) -> Result<Vec<ActionTerm>, ActionError> {
        let sig = &self.sig;
        // rows (c, a, b, d), nu, and the (s1, s2, dd, shift) shape of the formula
        let (rc, ra, rb, rd, nu) = if k >= 0 {
            let k = k as usize;
            (2 * k, 2 * k + 1, 2 * k + 2, 2 * k + 3, 0u8)
        } else {
            let kk = (-k) as usize;
            (2 * kk - 3, 2 * kk - 2, 2 * kk - 1, 2 * kk, 1u8)
        };
        let (s1, s2, dd, sh) = match (raising, k >= 0) {
            (true, true) => (-1, 0, -1, 1),
            (false, true) => (0, 1, 1, -1),
            (true, false) => (1, 0, 1, -1),
            (false, false) => (0, -1, -1, 1),
        };
        let lrow = |r: usize| -> Vec<(i64, i64)> {
            if r == 0 {
                return vec![];
            }
            row_indices(r).zip(p.row(sig, r)).map(|(i, o)| (i, o - i)).collect()
        };
        let (lc, la, lb, ld) = (lrow(rc), lrow(ra), lrow(rb), lrow(rd));
        let mut out = Vec::new();
        for &(j, laj) in &la {
            for &(l, lbl) in &lb {
                let mut num = Vec::with_capacity(lb.len() + lc.len() + ld.len() + la.len());
                num.extend(lb.iter().filter(|t| t.0 != l).map(|t| t.1 - laj + s1));
                num.extend(lc.iter().map(|t| t.1 - laj + s1));
                num.extend(ld.iter().map(|t| t.1 - lbl + s2));
                num.extend(la.iter().filter(|t| t.0 != j).map(|t| t.1 - lbl + s2));
                if num.contains(&0) {
                    continue;
                }
                let Some(target) = p.shift_many(sig, &[(j, ra, sh), (l, rb, sh)]) else {
                    self.note_deletion(|| {
                        format!("{}_{k} on {p} at (j, l) = ({j}, {l})", if raising { 'e' } else { 'f' })
                    });
                    continue;
                };
                let mut den = Vec::with_capacity(2 * (la.len() + lb.len()));
                for t in la.iter().filter(|t| t.0 != j) {
                    den.push(t.1 - laj);
                    den.push(t.1 - laj + dd);
                }
                for t in lb.iter().filter(|t| t.0 != l) {
                    den.push(t.1 - lbl);
                    den.push(t.1 - lbl + dd);
                }
                let mag = CycloScalar::sqrt_abs_ratio(&num, &den).map_err(|_| ActionError::ZeroDenominator {
                    gen: format!("{}_{k}", if raising { 'e' } else { 'f' }),
                    pattern: p.to_string(),
                })?;
                let sign = -s_sign(j, l, nu);
                out.push(ActionTerm {
                    target,
                    coeff: mag.scale(&num_rational::BigRational::from_integer(sign.into())),
                    num_args: num,
                    den_args: den,
                });
            }
        }
        Ok(out)
    }

    pub fn apply_e(&self, k: i64, p: &CPattern) -> Result<LinComb<CycloScalar>, ActionError> {
        Ok(collect(&self.e_terms(k, p)?))
    }

    pub fn apply_f(&self, k: i64, p: &CPattern) -> Result<LinComb<CycloScalar>, ActionError> {
        Ok(collect(&self.f_terms(k, p)?))
    }

    /// `h_i` is diagonal: returns its eigenvalue on `p`.
    pub fn apply_h(&self, i: i64, p: &CPattern) -> WeightValue {
        weight::weight(&self.sig, p, i)
    }

    pub fn apply_c(&self, _p: &CPattern) -> WeightValue {
        weight::central_weight(&self.sig)
    }

    /// Eigenvalue of the gl generator `H_i`.
    pub fn gl_h(&self, i: i64, p: &CPattern) -> WeightValue {
        weight::gl_weight(&self.sig, p, i)
    }

    /// Smallest `N` with `p` in `V_N`.
    pub fn window_of(&self, p: &CPattern) -> usize {
        if *p == CPattern::highest_weight(&self.sig) {
            1
        } else {
            p.depth_requirement()
        }
    }

    /// Far from the pattern's nontrivial rows only the term lowering
    /// `(k, 2k+1)` and `(k, 2k+2)` survives, with coefficient
    /// `-|[M_{k+1} - M_k]|^{1/2}`.
    pub fn f_closed_form(&self, k: i64, p: &CPattern) -> Result<LinComb<CycloScalar>, ActionError> {
        let n = self.window_of(p);
        if k < 1 || 2 * k < n as i64 {
            return Err(ActionError::ClosedFormDomain { k, n });
        }
        let sig = &self.sig;
        let arg = sig.value(k + 1) - sig.value(k);
        let mut out = LinComb::zero();
        if arg == 0 {
            return Ok(out);
        }
        let r = 2 * k as usize + 1;
        if let Some(t) = p.shift_many(sig, &[(k, r, -1), (k, r + 1, -1)]) {
            let c = CycloScalar::sqrt_abs_ratio(&[arg], &[]).expect("no denominator");
            out.add_term(t, c.neg());
        }
        Ok(out)
    }
}

fn collect(terms: &[ActionTerm]) -> LinComb<CycloScalar> {
    let mut out = LinComb::zero();
    for t in terms {
        out.add_term(t.target.clone(), t.coeff.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls() -> Signature {
        Signature::levendorskii_soibelman(0)
    }

    #[test]
    fn apex_on_ls_window() {
        let sig = ls();
        let eng = Engine::new(sig.clone());
        let hw = CPattern::highest_weight(&sig);
        let up = hw.shift(&sig, 0, 1, 1).unwrap();
        let f = eng.apply_f(-1, &hw).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.coeff(&up).unwrap().eq_exact(&CycloScalar::one()));
        let e = eng.apply_e(-1, &up).unwrap();
        assert!(e.coeff(&hw).unwrap().eq_exact(&CycloScalar::one()));
        assert!(eng.apply_e(-1, &hw).unwrap().is_empty());
    }

    #[test]
    fn raising_kills_highest_weight() {
        for sig in [ls(), Signature::simple(-1, 1, vec![2, 1, 0]).unwrap()] {
            let eng = Engine::new(sig.clone());
            let hw = CPattern::highest_weight(&sig);
            for k in -8..=8 {
                assert!(eng.apply_e(k, &hw).unwrap().is_empty(), "k = {k}");
            }
        }
    }

    #[test]
    fn closed_form_example() {
        // M_0 = 2, M_1 = 1, M_2 = 0: f_1 on hw has coefficient -|[M_2 - M_1]|^{1/2} = -1
        let sig = Signature::simple(0, 2, vec![2, 1, 0]).unwrap();
        let eng = Engine::new(sig.clone());
        let hw = CPattern::highest_weight(&sig);
        let cf = eng.f_closed_form(1, &hw).unwrap();
        let target = hw.shift_many(&sig, &[(1, 3, -1), (1, 4, -1)]).unwrap();
        assert!(cf.coeff(&target).unwrap().eq_exact(&CycloScalar::from_int(-1)));
        let f = eng.apply_f(1, &hw).unwrap();
        assert!(f.sub(&cf).is_zero_exact());
        assert!(eng.f_closed_form(0, &hw).is_err());
    }

    #[test]
    fn ls_f1_vanishes() {
        let sig = ls();
        let eng = Engine::new(sig.clone());
        let hw = CPattern::highest_weight(&sig);
        assert!(eng.apply_f(1, &hw).unwrap().is_empty());
        assert!(eng.f_closed_form(1, &hw).unwrap().is_empty());
    }

    #[test]
    fn trivial_module_is_one_dimensional() {
        let sig = Signature::trivial();
        let eng = Engine::new(sig.clone());
        let hw = CPattern::highest_weight(&sig);
        for k in -6..=6 {
            assert!(eng.apply_e(k, &hw).unwrap().is_empty());
            assert!(eng.apply_f(k, &hw).unwrap().is_empty());
        }
    }

    #[test]
    fn sign_function() {
        assert_eq!(s_sign(1, 1, 0), 1);
        assert_eq!(s_sign(1, 1, 1), -1);
        assert_eq!(s_sign(0, 1, 1), 1);
        assert_eq!(s_sign(2, 1, 0), -1);
    }

    #[test]
    fn four_orientations_are_distinct() {
        let c = Orientation::candidates();
        for a in 0..4 {
            for b in 0..a {
                assert_ne!(c[a], c[b]);
            }
        }
        assert!(c.contains(&Orientation::RESOLVED) && c.contains(&Orientation::FLIPPED));
    }
}
