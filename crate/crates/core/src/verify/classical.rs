//! Classical-limit audit of matrix elements.
//!
//! Each element is `|prod [x] / prod [y]|^{1/2}` up to sign; its square at
//! `v = 1` must equal `|prod x / prod y|`, and it vanishes exactly when the
//! classical product does.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::action::{ActionTerm, Engine};

use super::{timed, CheckConfig, CheckResult, Engines, Status};

/// `None` when the element agrees with its classical counterpart.
pub fn classical_mismatch(t: &ActionTerm) -> Option<String> {
    let prod = |xs: &[i64]| xs.iter().fold(BigInt::one(), |acc, &x| acc * BigInt::from(x));
    let den = prod(&t.den_args);
    if den.is_zero() {
        return Some("zero classical denominator".into());
    }
    let classical = BigRational::new(prod(&t.num_args), den).abs();
    let q_zero = t.coeff.is_zero();
    if q_zero != classical.is_zero() {
        return Some(format!("zero status differs: q-element zero = {q_zero}, classical = {classical}"));
    }
    match t.coeff.square_at_one() {
        Some(sq) if sq == classical => None,
        Some(sq) => Some(format!("square at v = 1 is {sq}, classical product {classical}")),
        None => Some("element is not a single radical".into()),
    }
}

/// Audit every element an engine has produced so far.
pub fn audit_engine(eng: &Engine) -> (usize, Option<String>) {
    let mut n = 0;
    for (gen, src, terms) in eng.cached_terms() {
        for t in terms.iter() {
            n += 1;
            if let Some(w) = classical_mismatch(t) {
                return (n, Some(format!("{gen} on {src} -> {}: {w}", t.target)));
            }
        }
    }
    (n, None)
}

pub fn classical_limit_check(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (name, eng) in engines.iter() {
        out.push(timed(cfg, || {
            let (n, bad) = audit_engine(eng);
            let params = [("sig", name.to_string()), ("elements", n.to_string())];
            match bad {
                None => CheckResult::new("classical.elements", &params, Status::Pass),
                Some(w) => CheckResult::new("classical.elements", &params, Status::Fail).with_witness(w),
            }
        }));
        let (count, first) = eng.deletion_notes();
        if count > 0 {
            out.push(
                CheckResult::new(
                    "classical.deleted-terms",
                    &[("sig", name.to_string()), ("count", count.to_string())],
                    Status::Info,
                )
                .with_witness(format!(
                    "terms with nonzero numerator deleted for breaking betweenness, first: {}",
                    first.unwrap_or_default()
                )),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{CPattern, Signature};
    use crate::qarith::CycloScalar;

    #[test]
    fn bracket_examples() {
        let sig = Signature::trivial();
        let p = CPattern::highest_weight(&sig);
        let t = |num: Vec<i64>, coeff: CycloScalar| ActionTerm {
            target: p.clone(),
            coeff,
            num_args: num,
            den_args: vec![],
        };
        let ok = t(vec![2, 3], CycloScalar::sqrt_abs_ratio(&[2, 3], &[]).unwrap());
        assert!(classical_mismatch(&ok).is_none());
        let bad = t(vec![2, 3], CycloScalar::sqrt_abs_ratio(&[2, 2], &[]).unwrap());
        assert!(classical_mismatch(&bad).is_some());
        let one = t(vec![1, 1], CycloScalar::one());
        assert!(classical_mismatch(&one).is_none());
    }

    #[test]
    fn engine_audit_after_use() {
        let eng = Engine::new(Signature::simple(-1, 1, vec![2, 1, 0]).unwrap());
        for p in crate::patterns::enumerate_basis(eng.sig(), 3) {
            for k in -3..=3 {
                eng.apply_e(k, &p).unwrap();
                eng.apply_f(k, &p).unwrap();
            }
        }
        let (n, bad) = audit_engine(&eng);
        assert!(n > 0);
        assert!(bad.is_none(), "{bad:?}");
    }
}
