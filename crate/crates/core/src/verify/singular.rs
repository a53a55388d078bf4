//! Numeric singular-vector scan: the joint kernel of all raising operators on
//! each weight space of `V_N`. Evidence for irreducibility, not a proof.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::action::series::e_interval;
use crate::action::Engine;
use crate::patterns::{enumerate_basis, CPattern};

use super::{timed, CheckConfig, CheckResult, Engines, Mode, Status};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub fn default_samples() -> Vec<Complex64> {
    vec![Complex64::new(1.1, 0.0), Complex64::new(0.9, 0.0)]
}

/// Row sums of rows `1..N` determine the weight of a pattern in `V_N`.
fn weight_key(eng: &Engine, p: &CPattern, n: usize) -> Vec<i64> {
    (1..=n).map(|r| p.row_sum(eng.sig(), r)).collect()
}

#[derive(Clone, Debug)]
pub struct KernelScan {
    /// `(weight key, space dimension, kernel dimension, smallest retained singular value)`
    pub spaces: Vec<(Vec<i64>, usize, usize, f64)>,
}

impl KernelScan {
    pub fn total_kernel(&self) -> usize {
        self.spaces.iter().map(|s| s.2).sum()
    }
}

/// Joint kernel dimension of `{e_k}` on every weight space of `V_N` at `v0`.
pub fn kernel_scan(eng: &Engine, n: usize, v0: Complex64, tol: f64) -> KernelScan {
    let basis = enumerate_basis(eng.sig(), n);
    let mut spaces: BTreeMap<Vec<i64>, Vec<&CPattern>> = BTreeMap::new();
    for p in &basis {
        spaces.entry(weight_key(eng, p, n)).or_default().push(p);
    }
    // e_k outside I_N vanish on V_N, so the interval's integers suffice
    let iv = e_interval(n);
    let ks: Vec<i64> = (-(n as i64) - 1..=n as i64).filter(|&k| iv.contains(k)).collect();
    let mut out = Vec::new();
    for (key, ps) in spaces {
        let mut rows: HashMap<(i64, CPattern), usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for (col, p) in ps.iter().enumerate() {
            for &k in &ks {
                let img = eng.apply_e(k, p).expect("raising operator on a valid pattern");
                for (t, c) in img.terms() {
                    let next = rows.len();
                    let row = *rows.entry((k, t.clone())).or_insert(next);
                    entries.push((row, col, c.eval(v0)));
                }
            }
        }
        let dim = ps.len();
        if rows.is_empty() {
            out.push((key, dim, dim, f64::INFINITY));
            continue;
        }
        let mut m = DMatrix::<Complex64>::zeros(rows.len(), dim);
        for (r, c, x) in entries {
            m[(r, c)] += x;
        }
        let sv = m.singular_values();
        let scale = sv.iter().cloned().fold(1.0f64, f64::max);
        let retained: Vec<f64> = sv.iter().cloned().filter(|s| *s > tol * scale).collect();
        let smallest = retained.iter().cloned().fold(f64::INFINITY, f64::min);
        out.push((key, dim, dim - retained.len(), smallest));
    }
    KernelScan { spaces: out }
}

pub fn singular_scan(cfg: &CheckConfig, engines: &Engines) -> Vec<CheckResult> {
    let (samples, tol) = match &cfg.mode {
        Mode::Numeric { samples, tolerance } => (samples.clone(), *tolerance),
        Mode::Exact => (default_samples(), DEFAULT_TOLERANCE),
    };
    let mut out = Vec::new();
    for (name, eng) in engines.iter() {
        let hw = CPattern::highest_weight(eng.sig());
        for n in 1..=cfg.depth {
            for v0 in &samples {
                out.push(timed(cfg, || {
                    let scan = kernel_scan(eng, n, *v0, tol);
                    let total = scan.total_kernel();
                    let hw_key = weight_key(eng, &hw, n);
                    let hw_space = scan.spaces.iter().find(|s| s.0 == hw_key).map(|s| s.2);
                    let params = [
                        ("sig", name.to_string()),
                        ("N", n.to_string()),
                        ("v", v0.to_string()),
                        ("kernel", total.to_string()),
                    ];
                    let conditioning = scan.spaces.iter().map(|s| s.3).fold(f64::INFINITY, f64::min);
                    if total == 1 && hw_space == Some(1) {
                        let mut r = CheckResult::new("singular.kernel", &params, Status::Pass);
                        if conditioning < 1e3 * tol {
                            r.witness = Some(format!("ill-conditioned: smallest retained singular value {conditioning:e}"));
                        }
                        r
                    } else {
                        let extra: Vec<String> = scan
                            .spaces
                            .iter()
                            .filter(|s| s.2 > 0)
                            .map(|s| format!("{:?}: {} of {}", s.0, s.2, s.1))
                            .collect();
                        CheckResult::new("singular.kernel", &params, Status::Fail)
                            .with_witness(format!("kernel per weight space {}", extra.join("; ")))
                    }
                }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Signature;

    #[test]
    fn trivial_and_ls() {
        let t = Engine::new(Signature::trivial());
        let s = kernel_scan(&t, 3, Complex64::new(1.1, 0.0), DEFAULT_TOLERANCE);
        assert_eq!(s.total_kernel(), 1);
        let ls = Engine::new(Signature::levendorskii_soibelman(0));
        for v0 in default_samples() {
            assert_eq!(kernel_scan(&ls, 3, v0, DEFAULT_TOLERANCE).total_kernel(), 1);
        }
        let b = Engine::new(Signature::simple(-1, 1, vec![2, 1, 0]).unwrap());
        assert_eq!(kernel_scan(&b, 4, Complex64::new(1.1, 0.0), DEFAULT_TOLERANCE).total_kernel(), 1);
    }
}
