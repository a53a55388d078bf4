//! The q-number identities behind the commutation and Serre relations, as
//! expression trees for a concrete instance size.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::qarith::expr::{Affine, Expr, Family, Point, Range};
use crate::qarith::pit::{sample_point, PitMode, VarKind, VarSpec};

use super::IdentityError;

/// Retry budget for drawing an admissible configuration.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// Double sum over two adjacent row pairs collapsing to one bracket
    /// (the `[e_i, f_i]` reduction on even rows).
    CommutatorLower,
    /// Companion of the lower form, shifted by one row.
    CommutatorUpper,
    /// Rational two-sum identity in `A, B, C, D` after `q^{2L} -> A`.
    ResidueExpanded,
    /// The same identity regrouped as nested sums.
    ResidueRegrouped,
    /// Partial-fraction form of the residue sum.
    PartialFractions,
    /// Alternating sum over one row of bracket products vanishing.
    RowSumVanishing,
    /// Two-block bilinear Serre kernel.
    SerreBilinear,
    /// Two-fraction Serre kernel.
    SerreFraction,
    /// `[a-1] - [2][a] + [a+1] = 0`.
    ThreeTerm,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::CommutatorLower,
        IdentityId::CommutatorUpper,
        IdentityId::ResidueExpanded,
        IdentityId::ResidueRegrouped,
        IdentityId::PartialFractions,
        IdentityId::RowSumVanishing,
        IdentityId::SerreBilinear,
        IdentityId::SerreFraction,
        IdentityId::ThreeTerm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::CommutatorLower => "commutator-lower",
            IdentityId::CommutatorUpper => "commutator-upper",
            IdentityId::ResidueExpanded => "residue-expanded",
            IdentityId::ResidueRegrouped => "residue-regrouped",
            IdentityId::PartialFractions => "partial-fractions",
            IdentityId::RowSumVanishing => "row-sum-vanishing",
            IdentityId::SerreBilinear => "serre-bilinear",
            IdentityId::SerreFraction => "serre-fraction",
            IdentityId::ThreeTerm => "three-term",
        }
    }

    /// Identities in integer bracket arguments, checkable with `q` symbolic.
    pub fn is_bracket_identity(self) -> bool {
        !matches!(
            self,
            IdentityId::ResidueExpanded | IdentityId::ResidueRegrouped | IdentityId::PartialFractions
        )
    }

    /// Smallest admissible instance size; identities without a size use 1.
    pub fn min_size(self) -> usize {
        match self {
            IdentityId::CommutatorLower | IdentityId::CommutatorUpper => 1,
            IdentityId::ResidueExpanded
            | IdentityId::ResidueRegrouped
            | IdentityId::PartialFractions
            | IdentityId::RowSumVanishing => 2,
            _ => 1,
        }
    }

    /// Exact evaluation for small instances, a 62-bit prime field beyond.
    pub fn default_mode(self, size: usize) -> PitMode {
        if self.is_bracket_identity() {
            PitMode::Symbolic
        } else if size <= 4 {
            PitMode::ExactRational
        } else {
            PitMode::PrimeField(crate::qarith::modp::prime_pool()[0])
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, IdentityError> {
        IdentityId::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| IdentityError::UnknownIdentity(s.to_string()))
    }
}

/// Both sides of one identity at a fixed size, with its free variables.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: IdentityId,
    pub size: usize,
    pub lhs: Expr,
    pub rhs: Expr,
    pub vars: Vec<VarSpec>,
}

fn v(name: &str) -> Affine {
    Affine::var(name)
}

fn ent(fam: &str, idx: &str) -> Affine {
    Affine::fam(fam, v(idx))
}

fn br(a: Affine) -> Expr {
    Expr::br(a)
}

fn prod(var: &str, lo: i64, hi: i64, skip: Option<&str>, body: Expr) -> Expr {
    let r = Range::new(var, lo, hi);
    Expr::prod(if let Some(s) = skip { r.skipping(s) } else { r }, body)
}

fn sum(var: &str, lo: i64, hi: i64, body: Expr) -> Expr {
    Expr::sum(Range::new(var, lo, hi), body)
}

/// Affine sum of every entry of an integer family.
fn row_total(fam: &str, lo: i64, hi: i64) -> Affine {
    (lo..=hi).fold(Affine::c(0), |acc, i| acc + Affine::fam(fam, Affine::c(i)))
}

/// Row layout `(name, lo, hi)` of the four L-rows entering a commutator identity.
pub fn commutator_rows(id: IdentityId, k: i64) -> [(&'static str, i64, i64); 4] {
    match id {
        IdentityId::CommutatorLower => [("L0", 1 - k, k - 2), ("L1", 1 - k, k - 1), ("L2", -k, k - 1), ("L3", -k, k)],
        _ => [("L1", 1 - k, k - 1), ("L2", -k, k - 1), ("L3", -k, k), ("L4", -k - 1, k)],
    }
}

/// `sum_{s,j,l} (-1)^s N1/D1 * N2/D2` over rows `(outer, inner, summed, far)`.
/// Brackets carry the shift `sigma*s` or `sigma*(s - 1)`.
fn commutator_lhs(rows: &[(&str, i64, i64); 4], sigma: i64) -> Expr {
    let [(r0, lo0, hi0), (r1, lo1, hi1), (r2, lo2, hi2), (r3, lo3, hi3)] = *rows;
    let t0 = || v("s") * sigma;
    let t1 = || v("s") * sigma - sigma;
    let n1 = prod("i", lo2, hi2, Some("l"), br(ent(r2, "i") - ent(r1, "j") + t1()))
        * prod("i", lo0, hi0, None, br(ent(r0, "i") - ent(r1, "j") + t1()));
    let d1 = prod(
        "i",
        lo1,
        hi1,
        Some("j"),
        br(ent(r1, "i") - ent(r1, "j") + t0()) * br(ent(r1, "i") - ent(r1, "j") + t1()),
    );
    let n2 = prod("i", lo3, hi3, None, br(ent(r3, "i") - ent(r2, "l") + t0()))
        * prod("i", lo1, hi1, Some("j"), br(ent(r1, "i") - ent(r2, "l") + t0()));
    let d2 = prod(
        "i",
        lo2,
        hi2,
        Some("l"),
        br(ent(r2, "i") - ent(r2, "l") + t0()) * br(ent(r2, "i") - ent(r2, "l") + t1()),
    );
    let body = Expr::SignPow(v("s")) * (n1 / d1) * (n2 / d2);
    sum("s", 0, 1, sum("j", lo1, hi1, sum("l", lo2, hi2, body)))
}

fn int_rows(rows: &[(&str, i64, i64)]) -> Vec<VarSpec> {
    rows.iter()
        .map(|&(name, lo, hi)| VarSpec::int_family(name, lo, (hi - lo + 1).max(0) as usize))
        .collect()
}

fn rat_families(n: usize) -> Vec<VarSpec> {
    vec![
        VarSpec::rational_family("A", n - 1),
        VarSpec::rational_family("B", n),
        VarSpec::rational_family("C", n + 1),
        VarSpec::rational_family("D", n - 2),
    ]
}

fn a(i: &str) -> Expr {
    Expr::at("A", v(i))
}
fn b(i: &str) -> Expr {
    Expr::at("B", v(i))
}
fn c(i: &str) -> Expr {
    Expr::at("C", v(i))
}
fn d(i: &str) -> Expr {
    Expr::at("D", v(i))
}
fn qp(k: i64) -> Expr {
    Expr::q().pow(k)
}

/// `(q - q^{-1})(1 - q^2 prod D prod C / (prod A prod B))` without the first factor.
fn residue_rhs(n: i64) -> Expr {
    Expr::int(1)
        - qp(2) * prod("x", 1, n - 2, None, d("x")) * prod("x", 1, n + 1, None, c("x"))
            / (prod("x", 1, n - 1, None, a("x")) * prod("x", 1, n, None, b("x")))
}

fn residue_expanded(n: i64) -> Expr {
    // term for the A-pole at index j and B-pole at index l, with the
    // q-power `g` marking which side carries the shift
    let term = |g: i64, lead: Expr| {
        let (sa, sb) = if g < 0 { (qp(g), Expr::int(1)) } else { (Expr::int(1), qp(g)) };
        let num = prod("i", 1, n, Some("l"), a("j") - sa.clone() * b("i"))
            * prod("x", 1, n - 2, None, a("j") - sa.clone() * d("x"))
            * prod("x", 1, n + 1, None, b("l") - sb.clone() * c("x"))
            * prod("i", 1, n - 1, Some("j"), b("l") - sb.clone() * a("i"));
        let den = a("j")
            * b("l")
            * prod("i", 1, n - 1, Some("j"), (a("j") - a("i")) * (a("j") - qp(g) * a("i")))
            * prod("i", 1, n, Some("l"), (b("l") - b("i")) * (b("l") - qp(g) * b("i")));
        sum("j", 1, n - 1, sum("l", 1, n, lead * num / den))
    };
    term(-2, Expr::q()) - term(2, qp(-1))
}

fn residue_regrouped(n: i64) -> Expr {
    let left = {
        let outer = Expr::q() * prod("x", 1, n, None, a("j") - qp(-2) * b("x")) * prod("x", 1, n - 2, None, a("j") - qp(-2) * d("x"))
            / (a("j") * prod("i", 1, n - 1, Some("j"), (a("j") - a("i")) * (a("j") - qp(-2) * a("i"))));
        let inner = sum(
            "l",
            1,
            n,
            prod("x", 1, n + 1, None, b("l") - c("x")) * prod("i", 1, n - 1, Some("j"), b("l") - a("i"))
                / ((a("j") - qp(-2) * b("l"))
                    * b("l")
                    * prod("i", 1, n, Some("l"), (b("l") - b("i")) * (b("l") - qp(-2) * b("i")))),
        );
        sum("j", 1, n - 1, outer * inner)
    };
    let right = {
        let outer = qp(-1) * prod("x", 1, n + 1, None, b("l") - qp(2) * c("x")) * prod("x", 1, n - 1, None, b("l") - qp(2) * a("x"))
            / (b("l") * prod("i", 1, n, Some("l"), (b("l") - b("i")) * (b("l") - qp(2) * b("i"))));
        let inner = sum(
            "j",
            1,
            n - 1,
            prod("i", 1, n, Some("l"), a("j") - b("i")) * prod("x", 1, n - 2, None, a("j") - d("x"))
                / (a("j")
                    * (b("l") - qp(2) * a("j"))
                    * prod("i", 1, n - 1, Some("j"), (a("j") - a("i")) * (a("j") - qp(2) * a("i")))),
        );
        sum("l", 1, n, outer * inner)
    };
    left - right
}

/// Cross denominators carry `q^{-cross}` and `q^{cross}`; the identity holds
/// for `cross = 4` (the pole set of the auxiliary residue function), not for 2.
fn partial_fractions(n: i64, cross: i64) -> Expr {
    let at_a = prod("x", 1, n - 2, None, a("j") - qp(-2) * d("x")) * prod("x", 1, n + 1, None, a("j") - qp(-2) * c("x"))
        / (a("j") * prod("i", 1, n - 1, Some("j"), a("j") - a("i")) * prod("x", 1, n, None, a("j") - qp(-cross) * b("x")));
    let at_b = prod("x", 1, n + 1, None, b("l") - qp(2) * c("x")) * prod("x", 1, n - 2, None, b("l") - qp(2) * d("x"))
        / (b("l") * prod("i", 1, n, Some("l"), b("l") - b("i")) * prod("x", 1, n - 1, None, b("l") - qp(cross) * a("x")));
    sum("j", 1, n - 1, at_a) + sum("l", 1, n, at_b)
}

fn row_sum_vanishing(n: i64) -> Expr {
    let fam = |f: &str, x: &str| Affine::fam(f, v(x));
    let ai = || fam("a", "i");
    let block = |shift: i64, sgn: i64| {
        prod("x", 1, n - 1, None, br(ai() - fam("b", "x") + shift))
            * prod("x", 1, n - 1, None, br(ai() - fam("c", "x") + shift))
            / prod("j", 1, n, Some("i"), br(ai() - fam("a", "j")) * br(ai() - fam("a", "j") + sgn))
    };
    sum("i", 1, n, block(-1, -1) - block(0, 1))
}

fn serre_bilinear() -> Expr {
    let x = |name: &str| v(name);
    let b2 = || br(Affine::c(2));
    let first = br(x("a") - x("b") - 1) * br(x("c") - x("b") - 1) - b2() * br(x("a") - x("b")) * br(x("c") - x("b") - 1)
        + br(x("a") - x("b")) * br(x("c") - x("b"));
    let first_tail = br(x("a") - x("d")) * br(x("c") - x("e") - 1) / (br(x("d") - x("e") - 1) * br(x("c") - x("a") - 1))
        + br(x("c") - x("d") - 1) * br(x("a") - x("e")) / (br(x("d") - x("e") + 1) * br(x("c") - x("a") - 1));
    let second = br(x("a") - x("b") - 1) * br(x("c") - x("b") - 1) - b2() * br(x("a") - x("b") - 1) * br(x("c") - x("b"))
        + br(x("a") - x("b")) * br(x("c") - x("b"));
    let second_tail = br(x("a") - x("e") - 1) * br(x("c") - x("d")) / (br(x("d") - x("e") - 1) * br(x("c") - x("a") + 1))
        + br(x("a") - x("d") - 1) * br(x("c") - x("e")) / (br(x("d") - x("e") + 1) * br(x("c") - x("a") + 1));
    first * first_tail + second * second_tail
}

fn serre_fraction() -> Expr {
    let (x, y) = (|| v("a"), || v("b"));
    let b2 = || br(Affine::c(2));
    (br(x() - 1) * br(y() - 1) - b2() * br(x()) * br(y() - 1) + br(x()) * br(y())) / br(x() - y() + 1)
        + (br(x() - 1) * br(y() - 1) - b2() * br(x() - 1) * br(y()) + br(x()) * br(y())) / br(x() - y() - 1)
}

fn three_term() -> Expr {
    br(v("a") - 1) - br(Affine::c(2)) * br(v("a")) + br(v("a") + 1)
}

fn int_vars(names: &[&str]) -> Vec<VarSpec> {
    names.iter().map(|n| VarSpec::int(n)).collect()
}

/// Build the instance of `id` at `size` (`k` for the commutator forms, `n`
/// for the rational and row-sum forms, ignored otherwise).
pub fn instance(id: IdentityId, size: usize) -> Result<Instance, IdentityError> {
    if size < id.min_size() {
        return Err(IdentityError::BadSize { id, size });
    }
    let s = size as i64;
    let (lhs, rhs, vars) = match id {
        IdentityId::CommutatorLower | IdentityId::CommutatorUpper => {
            let rows = commutator_rows(id, s);
            let sigma = if id == IdentityId::CommutatorLower { 1 } else { -1 };
            let [r0, r1, r2, r3] = rows;
            let total = if id == IdentityId::CommutatorLower {
                row_total(r1.0, r1.1, r1.2) - row_total(r0.0, r0.1, r0.2) - row_total(r3.0, r3.1, r3.2)
                    + row_total(r2.0, r2.1, r2.2)
            } else {
                row_total(r3.0, r3.1, r3.2) - row_total(r2.0, r2.1, r2.2) - row_total(r1.0, r1.1, r1.2)
                    + row_total(r0.0, r0.1, r0.2)
            };
            (commutator_lhs(&rows, sigma), br(total - 1), int_rows(&rows))
        }
        IdentityId::ResidueExpanded => (residue_expanded(s), (Expr::q() - qp(-1)) * residue_rhs(s), rat_families(size)),
        IdentityId::ResidueRegrouped => (residue_regrouped(s), (Expr::q() - qp(-1)) * residue_rhs(s), rat_families(size)),
        IdentityId::PartialFractions => (partial_fractions(s, 4), residue_rhs(s), rat_families(size)),
        IdentityId::RowSumVanishing => (
            row_sum_vanishing(s),
            Expr::int(0),
            vec![
                VarSpec::int_family("a", 1, size),
                VarSpec { distinct: false, ..VarSpec::int_family("b", 1, size - 1) },
                VarSpec { distinct: false, ..VarSpec::int_family("c", 1, size - 1) },
            ],
        ),
        IdentityId::SerreBilinear => (serre_bilinear(), Expr::int(0), int_vars(&["a", "b", "c", "d", "e"])),
        IdentityId::SerreFraction => (serre_fraction(), Expr::int(0), int_vars(&["a", "b"])),
        IdentityId::ThreeTerm => (three_term(), Expr::int(0), int_vars(&["a"])),
    };
    Ok(Instance { id, size, lhs, rhs, vars })
}

fn int_family<'p>(pt: &'p Point, name: &str) -> Result<&'p Family<i64>, IdentityError> {
    pt.int_fams
        .get(name)
        .ok_or_else(|| IdentityError::Malformed(format!("missing row {name}")))
}

fn int_param(pt: &Point, name: &str) -> Result<i64, IdentityError> {
    pt.ints
        .get(name)
        .copied()
        .ok_or_else(|| IdentityError::Malformed(format!("missing parameter {name}")))
}

/// Smallest pairwise gap `|x - y|` within a family (`None` for fewer than two entries).
fn min_gap(xs: &[i64]) -> Option<i64> {
    let mut best = None;
    for (i, x) in xs.iter().enumerate() {
        for y in &xs[i + 1..] {
            let g = (x - y).abs();
            best = Some(best.map_or(g, |b: i64| b.min(g)));
        }
    }
    best
}

impl Instance {
    /// Shape and non-degeneracy preconditions that do not depend on `q`.
    /// Conditions involving `q` surface as division by zero at evaluation.
    pub fn check_admissible(&self, pt: &Point) -> Result<(), IdentityError> {
        for spec in &self.vars {
            match &spec.kind {
                VarKind::IntFamily { start, len } => {
                    let f = int_family(pt, &spec.name)?;
                    if f.start != *start || f.values.len() != *len {
                        return Err(IdentityError::Malformed(format!(
                            "row {} needs {len} entries from index {start}",
                            spec.name
                        )));
                    }
                }
                VarKind::Int => {
                    int_param(pt, &spec.name)?;
                }
                VarKind::RationalFamily { len, .. } => {
                    let f = pt
                        .rat_fams
                        .get(&spec.name)
                        .ok_or_else(|| IdentityError::Malformed(format!("missing family {}", spec.name)))?;
                    if f.values.len() != *len {
                        return Err(IdentityError::Malformed(format!("family {} needs {len} values", spec.name)));
                    }
                    for (i, x) in f.values.iter().enumerate() {
                        if f.values[i + 1..].contains(x) {
                            return Err(IdentityError::Degenerate(format!("repeated value {x} in {}", spec.name)));
                        }
                        if x.is_zero() && (spec.name == "A" || spec.name == "B") {
                            return Err(IdentityError::Degenerate(format!("zero value in {}", spec.name)));
                        }
                    }
                }
                VarKind::Rational => {}
            }
        }
        let need_gap = |name: &str, gap: i64| -> Result<(), IdentityError> {
            let f = int_family(pt, name)?;
            match min_gap(&f.values) {
                Some(g) if g < gap => Err(IdentityError::Degenerate(format!(
                    "entries of {name} must differ by at least {gap}"
                ))),
                _ => Ok(()),
            }
        };
        let brackets_nonzero = |args: &[(&str, i64)]| -> Result<(), IdentityError> {
            for &(what, x) in args {
                if x == 0 {
                    return Err(IdentityError::Degenerate(format!("denominator [{what}] vanishes")));
                }
            }
            Ok(())
        };
        match self.id {
            IdentityId::CommutatorLower | IdentityId::CommutatorUpper => {
                let rows = commutator_rows(self.id, self.size as i64);
                // rows in denominators meet brackets [d], [d +- 1]
                need_gap(rows[0].0, 1)?;
                need_gap(rows[1].0, 2)?;
                need_gap(rows[2].0, 2)?;
                need_gap(rows[3].0, 1)?;
            }
            IdentityId::RowSumVanishing => need_gap("a", 2)?,
            IdentityId::SerreBilinear => {
                let p = |n: &str| int_param(pt, n);
                let (a, c, d, e) = (p("a")?, p("c")?, p("d")?, p("e")?);
                brackets_nonzero(&[
                    ("d-e-1", d - e - 1),
                    ("d-e+1", d - e + 1),
                    ("c-a-1", c - a - 1),
                    ("c-a+1", c - a + 1),
                ])?;
            }
            IdentityId::SerreFraction => {
                let (a, b) = (int_param(pt, "a")?, int_param(pt, "b")?);
                brackets_nonzero(&[("a-b+1", a - b + 1), ("a-b-1", a - b - 1)])?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Draw an admissible configuration, retrying at most [`MAX_ATTEMPTS`] times.
    pub fn sample_config(&self, mode: PitMode, rng: &mut ChaCha8Rng) -> Result<Point, IdentityError> {
        for _ in 0..MAX_ATTEMPTS {
            let pt = sample_point(&self.vars, mode, rng);
            if self.check_admissible(&pt).is_ok() {
                return Ok(pt);
            }
        }
        Err(IdentityError::Exhausted(MAX_ATTEMPTS))
    }
}

/// Point with integer rows given explicitly, from their natural start index.
pub fn rows_point(inst: &Instance, rows: &[Vec<i64>]) -> Result<Point, IdentityError> {
    let specs: Vec<_> = inst.vars.iter().filter(|s| matches!(s.kind, VarKind::IntFamily { .. })).collect();
    if specs.len() != rows.len() {
        return Err(IdentityError::Malformed(format!("expected {} rows, got {}", specs.len(), rows.len())));
    }
    let mut pt = Point::default();
    for (spec, vals) in specs.iter().zip(rows) {
        if let VarKind::IntFamily { start, .. } = spec.kind {
            pt.int_fams.insert(spec.name.clone(), Family::new(start, vals.clone()));
        }
    }
    Ok(pt)
}

/// Point with named integer parameters.
pub fn params_point(values: &[(&str, i64)]) -> Point {
    let mut pt = Point::default();
    for (k, x) in values {
        pt.ints.insert(k.to_string(), *x);
    }
    pt
}

/// Point with rational families `A, B, C, D` given as integers.
pub fn families_point(fams: [&[i64]; 4]) -> Point {
    let mut pt = Point::default();
    for (name, vals) in ["A", "B", "C", "D"].iter().zip(fams) {
        pt.rat_fams.insert(
            name.to_string(),
            Family::new(1, vals.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect()),
        );
    }
    pt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::expr::{ComplexCtx, CycloCtx, RationalCtx};
    use num_complex::Complex64;
    use num_rational::BigRational;
    use rand::SeedableRng;

    // Direct floating-point transcription of the lower commutator identity,
    // independent of the expression-tree builder.
    fn lower_direct(q: f64, rows: [&[i64]; 4], k: i64) -> (f64, f64) {
        let br = |x: i64| (q.powi(x as i32) - q.powi(-x as i32)) / (q - 1.0 / q);
        let [r0, r1, r2, r3] = rows;
        let mut tot = 0.0;
        for s in 0..2i64 {
            for j in 0..r1.len() {
                for l in 0..r2.len() {
                    let mut t = if s == 0 { 1.0 } else { -1.0 };
                    for (i, x) in r2.iter().enumerate() {
                        if i != l {
                            t *= br(x - r1[j] + s - 1);
                            t /= br(x - r2[l] + s) * br(x - r2[l] + s - 1);
                        }
                    }
                    for x in r0 {
                        t *= br(x - r1[j] + s - 1);
                    }
                    for (i, x) in r1.iter().enumerate() {
                        if i != j {
                            t /= br(x - r1[j] + s) * br(x - r1[j] + s - 1);
                            t *= br(x - r2[l] + s);
                        }
                    }
                    for x in r3 {
                        t *= br(x - r2[l] + s);
                    }
                    tot += t;
                }
            }
        }
        let sum = |r: &[i64]| r.iter().sum::<i64>();
        let _ = k;
        (tot, br(sum(r1) - sum(r0) - sum(r3) + sum(r2) - 1))
    }

    #[test]
    fn lower_commutator_small_example() {
        let inst = instance(IdentityId::CommutatorLower, 1).unwrap();
        let rows = [vec![], vec![5], vec![7, 2], vec![9, 4, 0]];
        let pt = rows_point(&inst, &rows).unwrap();
        assert_eq!(inst.check_point(&CycloCtx, &pt).unwrap(), None);
        // oracle: direct transcription, both sides agree numerically
        let (l, r) = lower_direct(1.21, [&[], &[5], &[7, 2], &[9, 4, 0]], 1);
        assert!((l - r).abs() < 1e-9 * r.abs().max(1.0));
        let num = ComplexCtx {
            v0: Complex64::new(1.1, 0.0),
            tol: 1e-9,
        };
        assert_eq!(inst.check_point(&num, &pt).unwrap(), None);
        // the tree evaluates to the same number as the transcription
        let lhs = inst.lhs.eval(&num, &pt).unwrap();
        assert!((lhs.re - l).abs() < 1e-9 * l.abs().max(1.0));
    }

    #[test]
    fn lower_commutator_k2_matches_transcription() {
        let inst = instance(IdentityId::CommutatorLower, 2).unwrap();
        let rows = [vec![3, -1], vec![6, 1, -4], vec![8, 4, 0, -5], vec![10, 2, -2, -6, -9]];
        let pt = rows_point(&inst, &rows).unwrap();
        assert_eq!(inst.check_point(&CycloCtx, &pt).unwrap(), None);
        let (l, r) = lower_direct(1.21, [&rows[0], &rows[1], &rows[2], &rows[3]], 2);
        assert!((l - r).abs() < 1e-8 * r.abs().max(1.0));
    }

    #[test]
    fn upper_commutator_small_and_duplicate() {
        let inst = instance(IdentityId::CommutatorUpper, 1).unwrap();
        let pt = rows_point(&inst, &[vec![3], vec![6, 1], vec![8, 4, -1], vec![9, 5, 2, -3]]).unwrap();
        assert_eq!(inst.check_point(&CycloCtx, &pt).unwrap(), None);
        let dup = rows_point(&inst, &[vec![3], vec![6, 6], vec![8, 4, -1], vec![9, 5, 2, -3]]).unwrap();
        assert!(matches!(inst.check_point(&CycloCtx, &dup), Err(IdentityError::Degenerate(_))));
        let short = rows_point(&inst, &[vec![3], vec![6], vec![8, 4, -1], vec![9, 5, 2, -3]]).unwrap();
        assert!(matches!(inst.check_point(&CycloCtx, &short), Err(IdentityError::Malformed(_))));
    }

    fn rq(q: i64, d: i64) -> RationalCtx {
        RationalCtx {
            q: BigRational::new(q.into(), d.into()),
        }
    }

    #[test]
    fn residue_forms_small_point() {
        let pt = families_point([&[3], &[5, 2], &[7, 4, 1], &[]]);
        for id in [IdentityId::ResidueExpanded, IdentityId::ResidueRegrouped, IdentityId::PartialFractions] {
            let inst = instance(id, 2).unwrap();
            assert_eq!(inst.check_point(&rq(3, 2), &pt).unwrap(), None, "{id}");
            assert_eq!(inst.check_point(&rq(-5, 7), &pt).unwrap(), None, "{id}");
        }
        // the two residue forms are literally equal, not just both correct
        let e = instance(IdentityId::ResidueExpanded, 2).unwrap();
        let g = instance(IdentityId::ResidueRegrouped, 2).unwrap();
        assert_eq!(e.lhs.eval(&rq(3, 2), &pt).unwrap(), g.lhs.eval(&rq(3, 2), &pt).unwrap());
        let dup = families_point([&[3], &[5, 5], &[7, 4, 1], &[]]);
        assert!(matches!(e.check_point(&rq(3, 2), &dup), Err(IdentityError::Degenerate(_))));
    }

    #[test]
    fn cross_exponent_two_is_not_an_identity() {
        let pt = families_point([&[3], &[5, 2], &[7, 4, 1], &[]]);
        let wrong = partial_fractions(2, 2);
        let lhs = wrong.eval(&rq(3, 2), &pt).unwrap();
        assert_ne!(lhs, residue_rhs(2).eval(&rq(3, 2), &pt).unwrap());
        // at q = 1 the exponent is invisible
        let lhs1 = wrong.eval(&rq(1, 1), &pt).unwrap();
        assert_eq!(lhs1, residue_rhs(2).eval(&rq(1, 1), &pt).unwrap());
    }

    #[test]
    fn partial_fractions_at_q_one() {
        let inst = instance(IdentityId::PartialFractions, 3).unwrap();
        let pt = families_point([&[3, -2], &[5, 2, 7], &[7, 4, 1, -3], &[11]]);
        assert_eq!(inst.check_point(&rq(1, 1), &pt).unwrap(), None);
    }

    #[test]
    fn row_sum_examples() {
        let inst = instance(IdentityId::RowSumVanishing, 2).unwrap();
        let pt = rows_point(&inst, &[vec![4, 0], vec![2], vec![7]]).unwrap();
        assert_eq!(inst.check_point(&CycloCtx, &pt).unwrap(), None);
        let adjacent = rows_point(&inst, &[vec![1, 0], vec![2], vec![7]]).unwrap();
        assert!(matches!(inst.check_point(&CycloCtx, &adjacent), Err(IdentityError::Degenerate(_))));
        let three = instance(IdentityId::RowSumVanishing, 3).unwrap();
        let pt = rows_point(&three, &[vec![5, 1, -3], vec![2, 0], vec![7, -1]]).unwrap();
        assert_eq!(three.check_point(&CycloCtx, &pt).unwrap(), None);
    }

    #[test]
    fn serre_kernels() {
        let bil = instance(IdentityId::SerreBilinear, 1).unwrap();
        for t in [[3, 1, 6, 4, 0], [2, 5, -3, 7, 1]] {
            let pt = params_point(&[("a", t[0]), ("b", t[1]), ("c", t[2]), ("d", t[3]), ("e", t[4])]);
            assert_eq!(bil.check_point(&CycloCtx, &pt).unwrap(), None);
        }
        // c = a leaves every denominator nonzero; c = a + 1 does not
        let same = params_point(&[("a", 3), ("b", 1), ("c", 3), ("d", 4), ("e", 0)]);
        assert_eq!(bil.check_point(&CycloCtx, &same).unwrap(), None);
        let next = params_point(&[("a", 3), ("b", 1), ("c", 4), ("d", 4), ("e", 0)]);
        assert!(matches!(bil.check_point(&CycloCtx, &next), Err(IdentityError::Degenerate(_))));

        let frac = instance(IdentityId::SerreFraction, 1).unwrap();
        for (a, b) in [(5, 5), (7, 3), (-4, 9)] {
            assert_eq!(frac.check_point(&CycloCtx, &params_point(&[("a", a), ("b", b)])).unwrap(), None);
        }
        let bad = params_point(&[("a", 4), ("b", 3)]);
        assert!(matches!(frac.check_point(&CycloCtx, &bad), Err(IdentityError::Degenerate(_))));
    }

    #[test]
    fn three_term_values() {
        let inst = instance(IdentityId::ThreeTerm, 1).unwrap();
        for a in [1, 0, -17] {
            assert_eq!(inst.check_point(&CycloCtx, &params_point(&[("a", a)])).unwrap(), None);
        }
    }

    #[test]
    fn sizes_and_names() {
        assert!(matches!(instance(IdentityId::CommutatorLower, 0), Err(IdentityError::BadSize { .. })));
        assert!(matches!(instance(IdentityId::ResidueExpanded, 1), Err(IdentityError::BadSize { .. })));
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("eq22".parse::<IdentityId>().is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_admissible() {
        for (id, size) in [(IdentityId::CommutatorLower, 1), (IdentityId::ResidueExpanded, 3), (IdentityId::SerreBilinear, 1)] {
            let inst = instance(id, size).unwrap();
            let mode = id.default_mode(size);
            let p1 = inst.sample_config(mode, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
            let p2 = inst.sample_config(mode, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
            assert_eq!(p1, p2);
            inst.check_admissible(&p1).unwrap();
        }
    }
}
