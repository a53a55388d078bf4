//! The diagonal series `sum_i h_i`, locality radii and annihilation
//! intervals, and support components of series summands.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::patterns::{weight, CPattern, Signature, WeightValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesStatus {
    Stabilized,
    Divergent,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesProbe {
    /// `partial[t] = sum_{|i| <= t} h_i` on the pattern.
    pub partial: Vec<WeightValue>,
    pub status: SeriesStatus,
    /// Beyond this `t` every increment equals `tail_increment`.
    pub tail_start: i64,
    pub tail_increment: WeightValue,
}

fn ceil_half(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

/// Partial sums of `sum_{|i| <= T} h_i` on `p`.
///
/// For `i >= t0` the increment is `M_n - xi1` and for `i <= -t0` it is
/// `M_m - xi0`, where `t0` clears both the pattern's nontrivial rows and the
/// signature's non-constant range. So the series stabilizes iff their sum vanishes.
pub fn series_partial(sig: &Signature, p: &CPattern, t: u32) -> SeriesProbe {
    let r = p.depth() as i64;
    let t0 = [ceil_half(r + 1), ceil_half(r + 2), sig.n(), -sig.m()]
        .into_iter()
        .max()
        .unwrap()
        .max(0);
    let tail = &(&sig.m_weight(sig.n()) - &sig.xi1()) + &(&sig.m_weight(sig.m()) - &sig.xi0());
    let mut partial = Vec::with_capacity(t as usize + 1);
    let mut acc = weight::weight(sig, p, 0);
    partial.push(acc.clone());
    for i in 1..=t as i64 {
        acc = &(&acc + &weight::weight(sig, p, i)) + &weight::weight(sig, p, -i);
        partial.push(acc.clone());
    }
    let status = if !tail.is_zero() {
        SeriesStatus::Divergent
    } else if t as i64 >= t0 {
        SeriesStatus::Stabilized
    } else {
        SeriesStatus::Undetermined
    };
    SeriesProbe {
        partial,
        status,
        tail_start: t0,
        tail_increment: tail,
    }
}

/// `r_N = max(ceil((N+3)/2), 1 - m, n)`
pub fn locality_radius(n: usize, sig: &Signature) -> i64 {
    ceil_half(n as i64 + 3).max(1 - sig.m()).max(sig.n())
}

/// Open interval with half-integer endpoints, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalfInterval {
    pub lo2: i64,
    pub hi2: i64,
}

impl HalfInterval {
    pub fn contains(&self, k: i64) -> bool {
        self.lo2 < 2 * k && 2 * k < self.hi2
    }
}

impl std::fmt::Display for HalfInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let h = |x: i64| {
            if x % 2 == 0 {
                (x / 2).to_string()
            } else {
                format!("{x}/2")
            }
        };
        write!(f, "({}, {})", h(self.lo2), h(self.hi2))
    }
}

/// `e_k V_N = 0` for `k` outside `(-(N+1)/2, (N-2)/2)`; also the interval `I_N`.
pub fn e_interval(n: usize) -> HalfInterval {
    let n = n as i64;
    HalfInterval {
        lo2: -(n + 1),
        hi2: n - 2,
    }
}

/// `f_k V_N = 0` outside `(min(-(N+3)/2, m-1), max(N/2, n))` (automatic xi).
pub fn f_interval(n: usize, sig: &Signature) -> HalfInterval {
    let n2 = n as i64;
    HalfInterval {
        lo2: (-(n2 + 3)).min(2 * (sig.m() - 1)),
        hi2: n2.max(2 * sig.n()),
    }
}

/// `h_k V_N = 0` outside `(min(-(N+1)/2, m), max(N/2, n))` (automatic xi).
pub fn h_interval(n: usize, sig: &Signature) -> HalfInterval {
    let n2 = n as i64;
    HalfInterval {
        lo2: (-(n2 + 1)).min(2 * sig.m()),
        hi2: n2.max(2 * sig.n()),
    }
}

/// Multiplicities `m_i` of a root-lattice element `alpha` and `gamma`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeriesSupport {
    pub alpha: BTreeMap<i64, u32>,
    pub gamma: BTreeMap<i64, u32>,
}

impl SeriesSupport {
    pub fn from_indices(alpha: &[i64], gamma: &[i64]) -> Self {
        let count = |xs: &[i64]| {
            let mut m = BTreeMap::new();
            for &x in xs {
                *m.entry(x).or_insert(0) += 1;
            }
            m
        };
        SeriesSupport {
            alpha: count(alpha),
            gamma: count(gamma),
        }
    }
}

/// Maximal integer intervals of `S(alpha) u S(gamma)`, joining neighbours.
pub fn support_components(s: &SeriesSupport) -> Vec<(i64, i64)> {
    let mut pts: Vec<i64> = s
        .alpha
        .iter()
        .chain(s.gamma.iter())
        .filter(|(_, m)| **m > 0)
        .map(|(i, _)| *i)
        .collect();
    pts.sort_unstable();
    pts.dedup();
    let mut out: Vec<(i64, i64)> = Vec::new();
    for x in pts {
        match out.last_mut() {
            Some(last) if last.1 + 1 == x => last.1 = x,
            _ => out.push((x, x)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::XiParam;
    use num_rational::BigRational;

    #[test]
    fn radius_values() {
        let ls = Signature::levendorskii_soibelman(0);
        assert_eq!(locality_radius(3, &ls), 3);
        assert_eq!(locality_radius(1, &Signature::trivial()), 2);
        let mut prev = 0;
        for n in 1..12 {
            let r = locality_radius(n, &ls);
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn intervals_for_ls_window_3() {
        let ls = Signature::levendorskii_soibelman(0);
        let e = e_interval(3);
        let outside: Vec<i64> = (-4..=4).filter(|&k| !e.contains(k)).collect();
        assert_eq!(outside, vec![-4, -3, -2, 1, 2, 3, 4]);
        let f = f_interval(3, &ls);
        let outside: Vec<i64> = (-4..=4).filter(|&k| !f.contains(k)).collect();
        assert_eq!(outside, vec![-4, -3, 2, 3, 4]);
        assert_eq!(e.to_string(), "(-2, 1/2)");
    }

    #[test]
    fn components() {
        let c = |xs: &[i64]| support_components(&SeriesSupport::from_indices(xs, &[]));
        assert_eq!(c(&[0, 1]), vec![(0, 1)]);
        assert_eq!(c(&[0, 2]), vec![(0, 0), (2, 2)]);
        assert_eq!(c(&[-1, 0, 1, 3]), vec![(-1, 1), (3, 3)]);
        let mixed = SeriesSupport::from_indices(&[0], &[1, 5]);
        assert_eq!(support_components(&mixed), vec![(0, 1), (5, 5)]);
    }

    #[test]
    fn series_examples() {
        let ls = Signature::levendorskii_soibelman(0);
        let hw = CPattern::highest_weight(&ls);
        let probe = series_partial(&ls, &hw, 5);
        assert_eq!(probe.status, SeriesStatus::Stabilized);
        assert_eq!(probe.partial.last().unwrap(), &WeightValue::int(-1));
        let t = Signature::trivial();
        let probe = series_partial(&t, &CPattern::highest_weight(&t), 4);
        assert_eq!(probe.partial.last().unwrap(), &WeightValue::int(0));
        let zero = BigRational::from_integer(0.into());
        let bent = ls.with_xi(XiParam::Value(zero), XiParam::Auto);
        let probe = series_partial(&bent, &CPattern::highest_weight(&bent), 6);
        assert_eq!(probe.status, SeriesStatus::Divergent);
        assert_eq!(probe.tail_increment, WeightValue::int(1));
    }
}
