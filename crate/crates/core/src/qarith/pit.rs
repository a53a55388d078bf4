//! Randomized polynomial identity testing.
//!
//! Both sides are evaluated at independently sampled points; a point at which
//! some denominator vanishes is discarded and resampled. When `q` is symbolic
//! (cyclotomic mode) each trial is an exact check of one integer instance;
//! otherwise the verdict carries a Schwartz-Zippel bound `D / |S|` on the
//! per-trial false-pass probability, where `D` bounds the numerator degree of
//! `lhs - rhs` and `S` is the sample set.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::expr::{CycloCtx, EvalError, Expr, Family, FieldCtx, Point, PrimeCtx, RationalCtx};
use super::modp;

pub const INT_RANGE: i64 = 12;
pub const RATIONAL_BOUND: i64 = 64;
pub const MAX_RESAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PitMode {
    /// `q` symbolic, brackets in factored cyclotomic form.
    Symbolic,
    /// Exact rationals, `q` sampled.
    ExactRational,
    /// Modular arithmetic, all continuous variables and `q` sampled in `F_p`.
    PrimeField(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    Int,
    IntFamily { start: i64, len: usize },
    Rational,
    RationalFamily { start: i64, len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub kind: VarKind,
    /// Family entries pairwise distinct.
    pub distinct: bool,
}

impl VarSpec {
    pub fn int(name: &str) -> Self {
        VarSpec {
            name: name.into(),
            kind: VarKind::Int,
            distinct: false,
        }
    }

    pub fn int_family(name: &str, start: i64, len: usize) -> Self {
        VarSpec {
            name: name.into(),
            kind: VarKind::IntFamily { start, len },
            distinct: true,
        }
    }

    pub fn rational_family(name: &str, len: usize) -> Self {
        VarSpec {
            name: name.into(),
            kind: VarKind::RationalFamily { start: 1, len },
            distinct: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equal {
        trials: usize,
        /// Human-readable confidence statement.
        confidence: String,
    },
    Counterexample {
        point: Point,
        lhs: String,
        rhs: String,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PitError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no non-degenerate sample point after {0} attempts")]
    Exhausted(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Sample a rational with numerator and denominator bounded by [`RATIONAL_BOUND`].
pub fn sample_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n = rng.gen_range(-RATIONAL_BOUND..=RATIONAL_BOUND);
    let d = rng.gen_range(1..=RATIONAL_BOUND);
    BigRational::new(n.into(), d.into())
}

/// Number of distinct values [`sample_rational`] can produce.
pub fn rational_sample_space() -> u64 {
    let mut count = 1; // zero
    for d in 1..=RATIONAL_BOUND {
        for n in 1..=RATIONAL_BOUND {
            if n.gcd(&d) == 1 {
                count += 2;
            }
        }
    }
    count
}

fn sample_distinct<T: PartialEq>(len: usize, mut draw: impl FnMut() -> T) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(len);
    while out.len() < len {
        let x = draw();
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Build a sample point for the given variable specs.
pub fn sample_point(vars: &[VarSpec], mode: PitMode, rng: &mut ChaCha8Rng) -> Point {
    let mut pt = Point::default();
    let draw_rat = |rng: &mut ChaCha8Rng| match mode {
        PitMode::PrimeField(p) => BigRational::from_integer(BigInt::from(rng.gen_range(0..p))),
        _ => sample_rational(rng),
    };
    for v in vars {
        match &v.kind {
            VarKind::Int => {
                pt.ints.insert(v.name.clone(), rng.gen_range(-INT_RANGE..=INT_RANGE));
            }
            VarKind::IntFamily { start, len } => {
                let vals = if v.distinct {
                    sample_distinct(*len, || rng.gen_range(-INT_RANGE..=INT_RANGE))
                } else {
                    (0..*len).map(|_| rng.gen_range(-INT_RANGE..=INT_RANGE)).collect()
                };
                pt.int_fams.insert(v.name.clone(), Family::new(*start, vals));
            }
            VarKind::Rational => {
                let x = draw_rat(rng);
                pt.rats.insert(v.name.clone(), x);
            }
            VarKind::RationalFamily { start, len } => {
                let vals = if v.distinct {
                    sample_distinct(*len, || draw_rat(rng))
                } else {
                    (0..*len).map(|_| draw_rat(rng)).collect()
                };
                pt.rat_fams.insert(v.name.clone(), Family::new(*start, vals));
            }
        }
    }
    pt
}

/// A rational `q` avoiding `0, 1, -1`.
fn sample_q_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = sample_rational(rng);
        if !q.is_zero() && q != BigRational::one() && q != -BigRational::one() {
            return q;
        }
    }
}

/// A residue `q` of multiplicative order above 64.
fn sample_q_mod(p: u64, rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let q = rng.gen_range(2..p);
        if (1..=64).all(|k| modp::pow_mod(q, k, p) != 1) {
            return q;
        }
    }
}

fn check_once<C: FieldCtx>(
    ctx: &C,
    lhs: &Expr,
    rhs: &Expr,
    pt: &Point,
) -> Result<Option<(String, String)>, EvalError> {
    let a = lhs.eval(ctx, pt)?;
    let b = rhs.eval(ctx, pt)?;
    if ctx.equal(&a, &b) {
        Ok(None)
    } else {
        Ok(Some((ctx.render(&a), ctx.render(&b))))
    }
}

fn degenerate(e: &EvalError) -> bool {
    matches!(e, EvalError::DivisionByZero | EvalError::Degenerate)
}

/// Test `lhs == rhs` on `trials` points drawn by `sample`.
///
/// The first point may be supplied deterministically by the sampler; every
/// degenerate point is replaced, at most [`MAX_RESAMPLES`] times per trial.
pub fn pit_equal_with(
    lhs: &Expr,
    rhs: &Expr,
    trials: usize,
    seed: u64,
    mode: PitMode,
    mut sample: impl FnMut(usize, &mut ChaCha8Rng) -> Point,
) -> Result<Verdict, PitError> {
    if trials == 0 {
        return Err(PitError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_degree = 0u64;
    for trial in 0..trials {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MAX_RESAMPLES {
                return Err(PitError::Exhausted(MAX_RESAMPLES));
            }
            let mut pt = sample(trial, &mut rng);
            let outcome = match mode {
                PitMode::Symbolic => check_once(&CycloCtx, lhs, rhs, &pt),
                PitMode::ExactRational => {
                    let q = sample_q_rational(&mut rng);
                    pt.rats.insert("q".into(), q.clone());
                    check_once(&RationalCtx { q }, lhs, rhs, &pt)
                }
                PitMode::PrimeField(p) => {
                    let q = sample_q_mod(p, &mut rng);
                    pt.rats.insert("q".into(), BigRational::from_integer(q.into()));
                    check_once(&PrimeCtx { p, q }, lhs, rhs, &pt)
                }
            };
            match outcome {
                Err(e) if degenerate(&e) => continue,
                Err(e) => return Err(e.into()),
                Ok(Some((l, r))) => {
                    return Ok(Verdict::Counterexample {
                        point: pt,
                        lhs: l,
                        rhs: r,
                    })
                }
                Ok(None) => {
                    if mode != PitMode::Symbolic {
                        let diff = lhs.clone() - rhs.clone();
                        max_degree = max_degree.max(diff.degree_bound(&pt)?.0);
                    }
                    break;
                }
            }
        }
    }
    let confidence = match mode {
        PitMode::Symbolic => format!("exact: q symbolic, {trials} integer instances checked"),
        PitMode::ExactRational => {
            let s = rational_sample_space();
            format!(
                "per-trial false-pass probability <= D/|S| = {max_degree}/{s} over {trials} trials"
            )
        }
        PitMode::PrimeField(p) => format!(
            "per-trial false-pass probability <= D/|S| = {max_degree}/{p} over {trials} trials"
        ),
    };
    Ok(Verdict::Equal { trials, confidence })
}

/// [`pit_equal_with`] using independent samples for `vars`. For the first
/// trial, scalar integer variables take the values `1, 2, 3, ...` in order.
pub fn pit_equal(
    lhs: &Expr,
    rhs: &Expr,
    vars: &[VarSpec],
    trials: usize,
    seed: u64,
    mode: PitMode,
) -> Result<Verdict, PitError> {
    let mut first = true;
    pit_equal_with(lhs, rhs, trials, seed, mode, |trial, rng| {
        let mut pt = sample_point(vars, mode, rng);
        if trial == 0 && first {
            first = false;
            for (k, v) in vars.iter().filter(|v| v.kind == VarKind::Int).enumerate() {
                pt.ints.insert(v.name.clone(), k as i64 + 1);
            }
        }
        pt
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::expr::Affine;

    #[test]
    fn literal_equality() {
        let e = Expr::br(Affine::c(2));
        let v = pit_equal(&e, &e, &[], 3, 1, PitMode::Symbolic).unwrap();
        assert!(v.is_equal());
    }

    #[test]
    fn three_term_recurrence_is_an_identity() {
        let a = || Affine::var("a");
        let lhs = Expr::br(a() - 1) - Expr::br(Affine::c(2)) * Expr::br(a()) + Expr::br(a() + 1);
        let vars = [VarSpec::int("a")];
        for mode in [
            PitMode::Symbolic,
            PitMode::ExactRational,
            PitMode::PrimeField(modp::prime_pool()[3]),
        ] {
            let v = pit_equal(&lhs, &Expr::Int(0), &vars, 20, 9, mode).unwrap();
            assert!(v.is_equal(), "{mode:?}");
        }
    }

    #[test]
    fn counterexample_found_at_first_point() {
        let lhs = Expr::br(Affine::var("a"));
        let rhs = Expr::br(Affine::var("a") + 1);
        match pit_equal(&lhs, &rhs, &[VarSpec::int("a")], 5, 0, PitMode::Symbolic).unwrap() {
            Verdict::Counterexample { point, .. } => assert_eq!(point.ints["a"], 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let e = Expr::Int(1);
        assert_eq!(pit_equal(&e, &e, &[], 0, 0, PitMode::Symbolic), Err(PitError::NoTrials));
    }

    #[test]
    fn always_degenerate_exhausts() {
        let e = Expr::Int(1) / Expr::br(Affine::c(0));
        assert_eq!(
            pit_equal(&e, &e, &[], 1, 0, PitMode::Symbolic),
            Err(PitError::Exhausted(MAX_RESAMPLES))
        );
    }

    #[test]
    fn rational_identity_with_q() {
        // (x - q)(x + q) = x^2 - q^2
        let x = || Expr::var("x");
        let lhs = (x() - Expr::q()) * (x() + Expr::q());
        let rhs = x().pow(2) - Expr::q().pow(2);
        let vars = [VarSpec {
            name: "x".into(),
            kind: VarKind::Rational,
            distinct: false,
        }];
        let v = pit_equal(&lhs, &rhs, &vars, 10, 4, PitMode::ExactRational).unwrap();
        assert!(v.is_equal());
        let bad = pit_equal(&lhs, &(rhs + Expr::Int(1)), &vars, 10, 4, PitMode::ExactRational).unwrap();
        assert!(!bad.is_equal());
    }
}
