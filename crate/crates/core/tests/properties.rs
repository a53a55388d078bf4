//! Property tests for the invariants of the arithmetic, pattern, action and
//! identity layers.

use std::collections::BTreeSet;

use ainf_core::action::Engine;
use ainf_core::identities::{instance, IdentityId};
use ainf_core::patterns::io::{parse_basis, write_basis};
use ainf_core::patterns::{enumerate_basis, CPattern, Signature, WeightValue};
use ainf_core::qarith::expr::{ComplexCtx, CycloCtx, RationalCtx};
use ainf_core::qarith::pit::PitMode;
use ainf_core::qarith::{qbracket, CycloScalar};
use ainf_core::verify::classical::classical_mismatch;
use ainf_core::verify::default_battery;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-8 * (1.0 + a.norm().max(b.norm()))
}

/// A scalar `c * [a1][a2] / [b1]` built from nonzero brackets.
fn scalar() -> impl Strategy<Value = CycloScalar> {
    let nz = prop_oneof![-7i64..=-1, 1i64..=7];
    (-5i64..=5, proptest::collection::vec(nz.clone(), 0..3), proptest::collection::vec(nz, 0..2))
        .prop_map(|(c, num, den)| CycloScalar::bracket_ratio(&num, &den).unwrap().mul(&CycloScalar::from_int(c)))
}

fn sample_v() -> impl Strategy<Value = Complex64> {
    prop_oneof![Just(Complex64::new(1.1, 0.0)), Just(Complex64::new(0.9, 0.0)), Just(Complex64::new(1.2, 0.1))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclo_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        let lhs = a.add(&b).mul(&c);
        let rhs = a.mul(&c).add(&b.mul(&c));
        prop_assert!(lhs.eq_exact(&rhs));
        prop_assert!(a.mul(&b).eq_exact(&b.mul(&a)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), v in sample_v()) {
        prop_assert!(close(a.mul(&b).eval(v), a.eval(v) * b.eval(v)));
        prop_assert!(close(a.add(&b).eval(v), a.eval(v) + b.eval(v)));
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!(a.mul(&inv).eq_exact(&CycloScalar::one()));
        }
    }

    #[test]
    fn brackets_agree_across_representations(n in -15i64..=15, v in sample_v()) {
        let q = v * v;
        let direct = if n == 0 { Complex64::new(0.0, 0.0) } else { (q.powi(n as i32) - q.powi(-n as i32)) / (q - 1.0 / q) };
        prop_assert!(close(CycloScalar::qbracket(n).eval(v), direct));
        prop_assert!(close(qbracket(n).eval_complex(v), direct));
        prop_assert_eq!(qbracket(n).at_one(), BigRational::from_integer(n.into()));
        prop_assert_eq!(qbracket(-n), -qbracket(n));
    }

    #[test]
    fn bracket_identities_exact_matches_numeric(idx in 0usize..9, seed in any::<u64>(), v in sample_v()) {
        let id = IdentityId::ALL[idx];
        prop_assume!(id.is_bracket_identity());
        let inst = instance(id, id.min_size()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pt = inst.sample_config(PitMode::Symbolic, &mut rng).unwrap();
        let exact = inst.lhs.eval(&CycloCtx, &pt);
        let numeric = inst.lhs.eval(&ComplexCtx { v0: v, tol: 1e-9 }, &pt);
        // the floating sum cancels heavily, so only a loose relative agreement is expected
        if let (Ok(x), Ok(z)) = (exact, numeric) {
            let x = x.eval(v);
            prop_assert!((x - z).norm() <= 1e-4 * (1.0 + x.norm()), "{id} at {pt}: {x} vs {z}");
        }
    }

    #[test]
    fn rational_identities_exact_matches_numeric(idx in 0usize..9, seed in any::<u64>(), a in 2i64..9, b in 2i64..9) {
        let id = IdentityId::ALL[idx];
        prop_assume!(!id.is_bracket_identity() && a != b);
        let inst = instance(id, id.min_size()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pt = inst.sample_config(PitMode::ExactRational, &mut rng).unwrap();
        let q = BigRational::new(a.into(), b.into());
        let v = Complex64::new(q.to_f64().unwrap().sqrt(), 0.0);
        let exact = inst.lhs.eval(&RationalCtx { q }, &pt);
        let numeric = inst.lhs.eval(&ComplexCtx { v0: v, tol: 1e-9 }, &pt);
        if let (Ok(x), Ok(z)) = (exact, numeric) {
            prop_assert!(close(Complex64::new(x.to_f64().unwrap(), 0.0), z), "{id} at {pt}");
        }
    }
}

fn battery_sig() -> impl Strategy<Value = Signature> {
    (0..default_battery().len()).prop_map(|i| default_battery()[i].1.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basis_is_valid_distinct_and_nested(sig in battery_sig(), n in 1usize..=5) {
        let basis = enumerate_basis(&sig, n);
        let set: BTreeSet<&CPattern> = basis.iter().collect();
        prop_assert_eq!(set.len(), basis.len());
        for p in &basis {
            prop_assert!(p.validate(&sig).is_empty(), "{p}");
            prop_assert!(p.depth() <= n);
        }
        let smaller: BTreeSet<CPattern> = enumerate_basis(&sig, n.saturating_sub(1).max(1)).into_iter().collect();
        prop_assert!(smaller.iter().all(|p| set.contains(p)));
        let text = write_basis(&basis, n, "sig");
        let (m, back, _) = parse_basis(&text, &sig).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(back, basis);
    }

    #[test]
    fn normalization_is_idempotent(sig in battery_sig(), n in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let basis = enumerate_basis(&sig, n);
        let p = pick.get(&basis);
        let mut rows = p.stored_rows().to_vec();
        rows.push(sig.row(rows.len() + 1));
        prop_assert_eq!(&CPattern::from_rows(&sig, rows).unwrap(), p);
    }

    /// `e_k`, `f_k` map a basis vector to valid patterns of a single weight, and
    /// every coefficient has the right classical limit.
    #[test]
    fn raising_and_lowering_are_weight_homogeneous(
        sig in battery_sig(),
        n in 1usize..=4,
        pick in any::<prop::sample::Index>(),
        k in -4i64..=4,
        raise in any::<bool>(),
    ) {
        let eng = Engine::new(sig.clone());
        let basis = enumerate_basis(&sig, n);
        let p = pick.get(&basis);
        let terms = if raise { eng.e_terms(k, p) } else { eng.f_terms(k, p) }.unwrap();
        let shift = |t: &CPattern| -> Vec<WeightValue> {
            (-6..=6).map(|i| &eng.apply_h(i, t) - &eng.apply_h(i, p)).collect()
        };
        let mut shifts = BTreeSet::new();
        for t in terms.iter() {
            prop_assert!(classical_mismatch(t).is_none());
        }
        let image = if raise { eng.apply_e(k, p) } else { eng.apply_f(k, p) }.unwrap();
        for (t, _) in image.terms() {
            prop_assert!(t.validate(&sig).is_empty(), "{t}");
            shifts.insert(format!("{:?}", shift(t)));
        }
        prop_assert!(shifts.len() <= 1, "{p}: image spans {} weights", shifts.len());
    }
}
