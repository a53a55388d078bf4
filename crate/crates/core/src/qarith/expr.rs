//! Expression trees for identity checking.
//!
//! An [`Expr`] is built once per instance size (all loop bounds are concrete
//! integers) and evaluated in any [`FieldCtx`]: symbolic `q` over the
//! factored cyclotomic scalars, exact rationals with a sampled `q`, a prime
//! field, or complex floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::cyclo::{CycloError, CycloScalar};
use super::laurent::pow_rational;
use super::modp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sample point is degenerate in this field")]
    Degenerate,
    #[error("unbound symbol {0}")]
    Unbound(String),
    #[error("index {index} outside family {family}")]
    OutOfRange { family: String, index: i64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// Integer-valued affine expression over loop variables, integer parameters
/// and integer family entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub constant: i64,
    pub terms: Vec<(i64, AffineAtom)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineAtom {
    Var(String),
    Fam(String, Box<Affine>),
}

impl Affine {
    pub fn c(n: i64) -> Self {
        Affine {
            constant: n,
            terms: vec![],
        }
    }

    pub fn var(name: &str) -> Self {
        Affine {
            constant: 0,
            terms: vec![(1, AffineAtom::Var(name.to_string()))],
        }
    }

    /// Family entry `name[index]`.
    pub fn fam(name: &str, index: Affine) -> Self {
        Affine {
            constant: 0,
            terms: vec![(1, AffineAtom::Fam(name.to_string(), Box::new(index)))],
        }
    }

    fn eval(&self, scope: &Scope<'_>) -> Result<i64, EvalError> {
        let mut acc = self.constant;
        for (c, atom) in &self.terms {
            let x = match atom {
                AffineAtom::Var(name) => scope.int(name)?,
                AffineAtom::Fam(name, idx) => scope.int_fam(name, idx.eval(scope)?)?,
            };
            acc += c * x;
        }
        Ok(acc)
    }
}

impl ops::Add for Affine {
    type Output = Affine;
    fn add(mut self, rhs: Affine) -> Affine {
        self.constant += rhs.constant;
        self.terms.extend(rhs.terms);
        self
    }
}

impl ops::Sub for Affine {
    type Output = Affine;
    fn sub(mut self, rhs: Affine) -> Affine {
        self.constant -= rhs.constant;
        self.terms
            .extend(rhs.terms.into_iter().map(|(c, a)| (-c, a)));
        self
    }
}

impl ops::Add<i64> for Affine {
    type Output = Affine;
    fn add(mut self, rhs: i64) -> Affine {
        self.constant += rhs;
        self
    }
}

impl ops::Sub<i64> for Affine {
    type Output = Affine;
    fn sub(mut self, rhs: i64) -> Affine {
        self.constant -= rhs;
        self
    }
}

impl ops::Mul<i64> for Affine {
    type Output = Affine;
    fn mul(mut self, k: i64) -> Affine {
        self.constant *= k;
        for (c, _) in self.terms.iter_mut() {
            *c *= k;
        }
        self
    }
}

/// Loop specification for big sums and products: `var` runs over `lo..=hi`,
/// skipping the current value of the loop variable `skip` when given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Range {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
    pub skip: Option<String>,
}

impl Range {
    pub fn new(var: &str, lo: i64, hi: i64) -> Self {
        Range {
            var: var.to_string(),
            lo,
            hi,
            skip: None,
        }
    }

    pub fn skipping(mut self, outer: &str) -> Self {
        self.skip = Some(outer.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Rational(BigRational),
    /// Field-valued scalar symbol; `q` is built in.
    Var(String),
    /// Field-valued family entry.
    At(String, Affine),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// q-bracket of an integer affine argument.
    Bracket(Affine),
    /// `(-1)^{affine}`
    SignPow(Affine),
    Sum(Range, Box<Expr>),
    Prod(Range, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Int(n)
    }

    pub fn q() -> Self {
        Expr::Var("q".to_string())
    }

    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn at(name: &str, index: Affine) -> Self {
        Expr::At(name.to_string(), index)
    }

    pub fn br(arg: Affine) -> Self {
        Expr::Bracket(arg)
    }

    pub fn pow(self, k: i64) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn sum(range: Range, body: Expr) -> Self {
        Expr::Sum(range, Box::new(body))
    }

    pub fn prod(range: Range, body: Expr) -> Self {
        Expr::Prod(range, Box::new(body))
    }

    /// Number of q-bracket nodes (mutation sites).
    pub fn bracket_sites(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if matches!(e, Expr::Bracket(_)) {
                n += 1
            }
        });
        n
    }

    fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.visit(f)),
            Expr::Sub(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f)
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sum(_, a) | Expr::Prod(_, a) => a.visit(f),
            _ => {}
        }
    }

    /// Which bracket sites are evaluated at all; a site inside an empty
    /// product or sum is dead and mutating it changes nothing. Loop bounds are
    /// concrete, and skips only name loop variables, so no point is needed.
    pub fn live_bracket_sites(&self) -> Result<Vec<bool>, EvalError> {
        let mut used = vec![false; self.bracket_sites()];
        let point = Point::default();
        let mut scope = Scope {
            point: &point,
            locals: Vec::new(),
        };
        self.mark_live(&mut scope, 0, &mut used)?;
        Ok(used)
    }

    fn mark_live(&self, scope: &mut Scope<'_>, base: usize, used: &mut [bool]) -> Result<(), EvalError> {
        match self {
            Expr::Bracket(_) => used[base] = true,
            Expr::Add(xs) | Expr::Mul(xs) => {
                let mut b = base;
                for x in xs {
                    x.mark_live(scope, b, used)?;
                    b += x.bracket_sites();
                }
            }
            Expr::Sub(a, b) | Expr::Div(a, b) => {
                a.mark_live(scope, base, used)?;
                b.mark_live(scope, base + a.bracket_sites(), used)?;
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.mark_live(scope, base, used)?,
            Expr::Sum(r, body) | Expr::Prod(r, body) => {
                let skip = match &r.skip {
                    Some(v) => Some(scope.int(v)?),
                    None => None,
                };
                for i in r.lo..=r.hi {
                    if skip == Some(i) {
                        continue;
                    }
                    scope.locals.push((r.var.clone(), i));
                    let res = body.mark_live(scope, base, used);
                    scope.locals.pop();
                    res?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Copy with the constant of the `site`-th bracket argument shifted by `delta`.
    pub fn mutate_bracket(&self, site: usize, delta: i64) -> Expr {
        let mut counter = 0;
        self.mutate_inner(site, delta, &mut counter)
    }

    fn mutate_inner(&self, site: usize, delta: i64, counter: &mut usize) -> Expr {
        let rec = |e: &Expr, counter: &mut usize| e.mutate_inner(site, delta, counter);
        match self {
            Expr::Bracket(a) => {
                let here = *counter;
                *counter += 1;
                if here == site {
                    Expr::Bracket(a.clone() + delta)
                } else {
                    self.clone()
                }
            }
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| rec(x, counter)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| rec(x, counter)).collect()),
            Expr::Sub(a, b) => {
                let a = rec(a, counter);
                Expr::Sub(Box::new(a), Box::new(rec(b, counter)))
            }
            Expr::Div(a, b) => {
                let a = rec(a, counter);
                Expr::Div(Box::new(a), Box::new(rec(b, counter)))
            }
            Expr::Neg(a) => Expr::Neg(Box::new(rec(a, counter))),
            Expr::Pow(a, k) => Expr::Pow(Box::new(rec(a, counter)), *k),
            Expr::Sum(r, a) => Expr::Sum(r.clone(), Box::new(rec(a, counter))),
            Expr::Prod(r, a) => Expr::Prod(r.clone(), Box::new(rec(a, counter))),
            _ => self.clone(),
        }
    }

    /// Evaluate at a point in the given field.
    pub fn eval<C: FieldCtx>(&self, ctx: &C, point: &Point) -> Result<C::T, EvalError> {
        let mut scope = Scope {
            point,
            locals: Vec::new(),
        };
        self.eval_in(ctx, &mut scope)
    }

    fn eval_in<C: FieldCtx>(&self, ctx: &C, scope: &mut Scope<'_>) -> Result<C::T, EvalError> {
        Ok(match self {
            Expr::Int(n) => ctx.int(*n),
            Expr::Rational(r) => ctx.rational(r)?,
            Expr::Var(name) => match scope.point.rats.get(name) {
                Some(r) => ctx.rational(r)?,
                None if name == "q" => ctx.q(),
                None => return Err(EvalError::Unbound(name.clone())),
            },
            Expr::At(name, idx) => {
                let i = idx.eval(scope)?;
                let fam = scope
                    .point
                    .rat_fams
                    .get(name)
                    .ok_or_else(|| EvalError::Unbound(name.clone()))?;
                ctx.rational(fam.get(i).ok_or_else(|| EvalError::OutOfRange {
                    family: name.clone(),
                    index: i,
                })?)?
            }
            Expr::Add(xs) => {
                let mut acc = ctx.int(0);
                for x in xs {
                    acc = ctx.add(&acc, &x.eval_in(ctx, scope)?);
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = ctx.int(1);
                for x in xs {
                    acc = ctx.mul(&acc, &x.eval_in(ctx, scope)?);
                }
                acc
            }
            Expr::Sub(a, b) => {
                let a = a.eval_in(ctx, scope)?;
                ctx.sub(&a, &b.eval_in(ctx, scope)?)
            }
            Expr::Neg(a) => ctx.neg(&a.eval_in(ctx, scope)?),
            Expr::Div(a, b) => {
                let a = a.eval_in(ctx, scope)?;
                let b = b.eval_in(ctx, scope)?;
                ctx.div(&a, &b)?
            }
            Expr::Pow(a, k) => {
                let base = a.eval_in(ctx, scope)?;
                let mut acc = ctx.int(1);
                for _ in 0..k.unsigned_abs() {
                    acc = ctx.mul(&acc, &base);
                }
                if *k < 0 {
                    ctx.div(&ctx.int(1), &acc)?
                } else {
                    acc
                }
            }
            Expr::Bracket(a) => ctx.bracket(a.eval(scope)?),
            Expr::SignPow(a) => ctx.int(if a.eval(scope)?.rem_euclid(2) == 0 { 1 } else { -1 }),
            Expr::Sum(r, body) | Expr::Prod(r, body) => {
                let is_sum = matches!(self, Expr::Sum(..));
                let skip = match &r.skip {
                    Some(v) => Some(scope.int(v)?),
                    None => None,
                };
                let mut acc = ctx.int(if is_sum { 0 } else { 1 });
                for i in r.lo..=r.hi {
                    if skip == Some(i) {
                        continue;
                    }
                    scope.locals.push((r.var.clone(), i));
                    let x = body.eval_in(ctx, scope);
                    scope.locals.pop();
                    let x = x?;
                    acc = if is_sum { ctx.add(&acc, &x) } else { ctx.mul(&acc, &x) };
                }
                acc
            }
        })
    }

    /// Upper bound on the total degree of numerator and denominator in the
    /// field-valued variables (including `q`), with brackets expanded as
    /// Laurent polynomials in `q` at the integer values of `point`.
    pub fn degree_bound(&self, point: &Point) -> Result<(u64, u64), EvalError> {
        let mut scope = Scope {
            point,
            locals: Vec::new(),
        };
        self.degree_in(&mut scope)
    }

    fn degree_in(&self, scope: &mut Scope<'_>) -> Result<(u64, u64), EvalError> {
        let add = |(n1, d1): (u64, u64), (n2, d2): (u64, u64)| ((n1 + d2).max(n2 + d1), d1 + d2);
        let mul = |(n1, d1): (u64, u64), (n2, d2): (u64, u64)| (n1 + n2, d1 + d2);
        Ok(match self {
            Expr::Int(_) | Expr::Rational(_) | Expr::SignPow(_) => (0, 0),
            Expr::Var(name) => {
                if scope.point.rats.contains_key(name) || name == "q" {
                    (1, 0)
                } else {
                    (0, 0)
                }
            }
            Expr::At(..) => (1, 0),
            Expr::Add(xs) => {
                let mut acc = (0, 0);
                for x in xs {
                    acc = add(acc, x.degree_in(scope)?);
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = (0, 0);
                for x in xs {
                    acc = mul(acc, x.degree_in(scope)?);
                }
                acc
            }
            Expr::Sub(a, b) => add(a.degree_in(scope)?, b.degree_in(scope)?),
            Expr::Neg(a) => a.degree_in(scope)?,
            Expr::Div(a, b) => {
                let (n1, d1) = a.degree_in(scope)?;
                let (n2, d2) = b.degree_in(scope)?;
                (n1 + d2, d1 + n2)
            }
            Expr::Pow(a, k) => {
                let (n, d) = a.degree_in(scope)?;
                let k = k.unsigned_abs();
                if self_is_negative_pow(self) {
                    (d * k, n * k)
                } else {
                    (n * k, d * k)
                }
            }
            Expr::Bracket(a) => {
                // [n] = (q^{2n} - 1) / (q^{n-1} (q^2 - 1))
                let n = a.eval(scope)?.unsigned_abs();
                (2 * n, n + 1)
            }
            Expr::Sum(r, body) | Expr::Prod(r, body) => {
                let is_sum = matches!(self, Expr::Sum(..));
                let skip = match &r.skip {
                    Some(v) => Some(scope.int(v)?),
                    None => None,
                };
                let mut acc = (0, 0);
                for i in r.lo..=r.hi {
                    if skip == Some(i) {
                        continue;
                    }
                    scope.locals.push((r.var.clone(), i));
                    let x = body.degree_in(scope);
                    scope.locals.pop();
                    acc = if is_sum { add(acc, x?) } else { mul(acc, x?) };
                }
                acc
            }
        })
    }
}

fn self_is_negative_pow(e: &Expr) -> bool {
    matches!(e, Expr::Pow(_, k) if *k < 0)
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Add(mut xs) => {
                xs.push(rhs);
                Expr::Add(xs)
            }
            other => Expr::Add(vec![other, rhs]),
        }
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Mul(mut xs) => {
                xs.push(rhs);
                Expr::Mul(xs)
            }
            other => Expr::Mul(vec![other, rhs]),
        }
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Integer family or rational family, indexed from `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family<T> {
    pub start: i64,
    pub values: Vec<T>,
}

impl<T> Family<T> {
    pub fn new(start: i64, values: Vec<T>) -> Self {
        Family { start, values }
    }

    pub fn get(&self, i: i64) -> Option<&T> {
        let k = i - self.start;
        if k < 0 {
            None
        } else {
            self.values.get(k as usize)
        }
    }
}

/// A sample point: integer parameters, integer families and rational values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    pub ints: BTreeMap<String, i64>,
    pub int_fams: BTreeMap<String, Family<i64>>,
    pub rats: BTreeMap<String, BigRational>,
    pub rat_fams: BTreeMap<String, Family<BigRational>>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, v) in &self.ints {
            parts.push(format!("{k}={v}"));
        }
        for (k, v) in &self.int_fams {
            let xs: Vec<String> = v.values.iter().map(|x| x.to_string()).collect();
            parts.push(format!("{k}=[{}]", xs.join(",")));
        }
        for (k, v) in &self.rats {
            parts.push(format!("{k}={v}"));
        }
        for (k, v) in &self.rat_fams {
            let xs: Vec<String> = v.values.iter().map(|x| x.to_string()).collect();
            parts.push(format!("{k}=[{}]", xs.join(",")));
        }
        f.write_str(&parts.join(" "))
    }
}

struct Scope<'a> {
    point: &'a Point,
    locals: Vec<(String, i64)>,
}

impl Scope<'_> {
    fn int(&self, name: &str) -> Result<i64, EvalError> {
        if let Some((_, v)) = self.locals.iter().rev().find(|(n, _)| n == name) {
            return Ok(*v);
        }
        self.point
            .ints
            .get(name)
            .copied()
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    }

    fn int_fam(&self, name: &str, i: i64) -> Result<i64, EvalError> {
        let fam = self
            .point
            .int_fams
            .get(name)
            .ok_or_else(|| EvalError::Unbound(name.to_string()))?;
        fam.get(i).copied().ok_or_else(|| EvalError::OutOfRange {
            family: name.to_string(),
            index: i,
        })
    }
}

/// A field in which expressions are evaluated.
pub trait FieldCtx {
    type T: Clone;
    fn int(&self, n: i64) -> Self::T;
    fn rational(&self, r: &BigRational) -> Result<Self::T, EvalError>;
    fn q(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn neg(&self, a: &Self::T) -> Self::T;
    fn div(&self, a: &Self::T, b: &Self::T) -> Result<Self::T, EvalError>;
    fn bracket(&self, n: i64) -> Self::T;
    fn equal(&self, a: &Self::T, b: &Self::T) -> bool;
    fn render(&self, a: &Self::T) -> String;
}

/// Symbolic `q = v^2` over factored cyclotomic scalars. Division is limited
/// to monomial divisors, which covers every bracket-product identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct CycloCtx;

impl FieldCtx for CycloCtx {
    type T = CycloScalar;
    fn int(&self, n: i64) -> CycloScalar {
        CycloScalar::from_int(n)
    }
    fn rational(&self, r: &BigRational) -> Result<CycloScalar, EvalError> {
        Ok(CycloScalar::from_rational(r.clone()))
    }
    fn q(&self) -> CycloScalar {
        CycloScalar::q()
    }
    fn add(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a.add(b)
    }
    fn sub(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a.sub(b)
    }
    fn mul(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a.mul(b)
    }
    fn neg(&self, a: &CycloScalar) -> CycloScalar {
        a.neg()
    }
    fn div(&self, a: &CycloScalar, b: &CycloScalar) -> Result<CycloScalar, EvalError> {
        a.div(b).map_err(|e| match e {
            CycloError::ZeroDenominator => EvalError::DivisionByZero,
            other => EvalError::Unsupported(other.to_string()),
        })
    }
    fn bracket(&self, n: i64) -> CycloScalar {
        CycloScalar::qbracket(n)
    }
    fn equal(&self, a: &CycloScalar, b: &CycloScalar) -> bool {
        a.eq_exact(b)
    }
    fn render(&self, a: &CycloScalar) -> String {
        a.to_string()
    }
}

/// Exact rationals with `q` specialized to a rational number.
#[derive(Clone, Debug)]
pub struct RationalCtx {
    pub q: BigRational,
}

impl FieldCtx for RationalCtx {
    type T = BigRational;
    fn int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn rational(&self, r: &BigRational) -> Result<BigRational, EvalError> {
        Ok(r.clone())
    }
    fn q(&self) -> BigRational {
        self.q.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, EvalError> {
        if b.is_zero() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }
    fn bracket(&self, n: i64) -> BigRational {
        let m = n.abs();
        let mut acc = BigRational::zero();
        for j in 0..m {
            acc += pow_rational(&self.q, m - 1 - 2 * j);
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
    fn equal(&self, a: &BigRational, b: &BigRational) -> bool {
        a == b
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Arithmetic modulo a prime with `q` specialized to a residue.
#[derive(Clone, Copy, Debug)]
pub struct PrimeCtx {
    pub p: u64,
    pub q: u64,
}

impl PrimeCtx {
    fn qpow(&self, k: i64) -> u64 {
        let base = if k < 0 {
            modp::inv_mod(self.q, self.p).expect("q is a unit")
        } else {
            self.q
        };
        modp::pow_mod(base, k.unsigned_abs(), self.p)
    }
}

impl FieldCtx for PrimeCtx {
    type T = u64;
    fn int(&self, n: i64) -> u64 {
        modp::bigint_mod(&BigInt::from(n), self.p)
    }
    fn rational(&self, r: &BigRational) -> Result<u64, EvalError> {
        modp::rational_mod(r, self.p).ok_or(EvalError::Degenerate)
    }
    fn q(&self) -> u64 {
        self.q
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        modp::add_mod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        modp::sub_mod(*a, *b, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        modp::mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        modp::sub_mod(0, *a, self.p)
    }
    fn div(&self, a: &u64, b: &u64) -> Result<u64, EvalError> {
        let inv = modp::inv_mod(*b, self.p).ok_or(EvalError::DivisionByZero)?;
        Ok(modp::mul_mod(*a, inv, self.p))
    }
    fn bracket(&self, n: i64) -> u64 {
        let m = n.abs();
        let mut acc = 0;
        for j in 0..m {
            acc = modp::add_mod(acc, self.qpow(m - 1 - 2 * j), self.p);
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }
    fn equal(&self, a: &u64, b: &u64) -> bool {
        a == b
    }
    fn render(&self, a: &u64) -> String {
        format!("{a} (mod {})", self.p)
    }
}

/// Complex floating point at `v = v0` (so `q = v0^2`).
#[derive(Clone, Copy, Debug)]
pub struct ComplexCtx {
    pub v0: Complex64,
    pub tol: f64,
}

impl FieldCtx for ComplexCtx {
    type T = Complex64;
    fn int(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn rational(&self, r: &BigRational) -> Result<Complex64, EvalError> {
        Ok(Complex64::new(r.to_f64().ok_or(EvalError::Degenerate)?, 0.0))
    }
    fn q(&self) -> Complex64 {
        self.v0 * self.v0
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn div(&self, a: &Complex64, b: &Complex64) -> Result<Complex64, EvalError> {
        if b.norm() == 0.0 {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }
    fn bracket(&self, n: i64) -> Complex64 {
        let q = self.q();
        let m = n.abs() as i32;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            acc += q.powi(m - 1 - 2 * j);
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
    fn equal(&self, a: &Complex64, b: &Complex64) -> bool {
        (a - b).norm() <= self.tol * (1.0 + a.norm().max(b.norm()))
    }
    fn render(&self, a: &Complex64) -> String {
        format!("{} {}", a.re, a.im)
    }
}

/// Convenience: a bracket with positive sign bookkeeping at `v = 1`.
pub fn bracket_at_one(n: i64) -> BigRational {
    RationalCtx {
        q: BigRational::one(),
    }
    .bracket(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_a(a: i64) -> Point {
        let mut p = Point::default();
        p.ints.insert("a".into(), a);
        p
    }

    fn recurrence() -> Expr {
        let a = || Affine::var("a");
        Expr::br(a() - 1) - Expr::br(Affine::c(2)) * Expr::br(a()) + Expr::br(a() + 1)
    }

    #[test]
    fn bracket_recurrence_in_all_fields() {
        let e = recurrence();
        for a in -6..=6 {
            let pt = point_a(a);
            assert!(e.eval(&CycloCtx, &pt).unwrap().is_zero());
            let rq = RationalCtx {
                q: BigRational::new(3.into(), 7.into()),
            };
            assert!(e.eval(&rq, &pt).unwrap().is_zero());
            let pq = PrimeCtx {
                p: modp::prime_pool()[0],
                q: 12345,
            };
            assert_eq!(e.eval(&pq, &pt).unwrap(), 0);
            let cq = ComplexCtx {
                v0: Complex64::new(1.1, 0.0),
                tol: 1e-12,
            };
            assert!(cq.equal(&e.eval(&cq, &pt).unwrap(), &Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn sums_products_and_skips() {
        // three products of two unit factors each
        let body = Expr::prod(
            Range::new("i", 0, 2).skipping("j"),
            Expr::br(Affine::c(1)) * Expr::Int(1) + Expr::Int(0),
        );
        let e = Expr::sum(Range::new("j", 0, 2), body);
        let v = e.eval(&RationalCtx { q: BigRational::one() }, &Point::default()).unwrap();
        assert_eq!(v, BigRational::from_integer(3.into()));
        let mut pt = Point::default();
        pt.int_fams.insert("x".into(), Family::new(-1, vec![5, 7]));
        let e2 = Expr::br(Affine::fam("x", Affine::c(0)) - Affine::fam("x", Affine::c(-1)));
        assert_eq!(
            e2.eval(&RationalCtx { q: BigRational::one() }, &pt).unwrap(),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn mutation_changes_a_bracket() {
        let e = recurrence();
        assert_eq!(e.bracket_sites(), 4);
        let m = e.mutate_bracket(0, 1);
        assert!(!m.eval(&CycloCtx, &point_a(3)).unwrap().is_zero());
    }

    #[test]
    fn dead_sites_inside_empty_products() {
        let live = Expr::br(Affine::c(1)) * Expr::prod(Range::new("i", 1, 0), Expr::br(Affine::var("i")));
        assert_eq!(live.live_bracket_sites().unwrap(), vec![true, false]);
        let skipped = Expr::sum(
            Range::new("j", 0, 0),
            Expr::prod(Range::new("i", 0, 0).skipping("j"), Expr::br(Affine::var("i"))),
        );
        assert_eq!(skipped.live_bracket_sites().unwrap(), vec![false]);
        assert_eq!(recurrence().live_bracket_sites().unwrap(), vec![true; 4]);
    }

    #[test]
    fn division_by_zero_bracket() {
        let e = Expr::Int(1) / Expr::br(Affine::var("a"));
        assert_eq!(e.eval(&CycloCtx, &point_a(0)).unwrap_err(), EvalError::DivisionByZero);
    }
}
