//! Enumeration of the window basis `V_N`.

use super::pattern::CPattern;
use super::signature::Signature;

/// All rows `r` interlacing under the given row `r + 1`.
fn rows_under(upper: &[i64]) -> Vec<Vec<i64>> {
    let len = upper.len() - 1;
    let mut out = vec![Vec::with_capacity(len)];
    for p in 0..len {
        let mut next = Vec::new();
        for prefix in &out {
            for x in upper[p + 1]..=upper[p] {
                let mut row = prefix.clone();
                row.push(x);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Basis of `V_N`: every C-pattern whose rows `>= N` equal the signature.
///
/// The order is lexicographic in the materialized rows `1, 2, ..., N - 1`
/// (row 1 first, entries left to right) and is part of the export contract.
pub fn enumerate_basis(sig: &Signature, n: usize) -> Vec<CPattern> {
    if n <= 1 {
        return vec![CPattern::highest_weight(sig)];
    }
    // stacks of rows from row N-1 down to row 1
    let mut partial: Vec<Vec<Vec<i64>>> = vec![vec![]];
    let upper_of = |stack: &Vec<Vec<i64>>| -> Vec<i64> {
        stack.last().cloned().unwrap_or_else(|| sig.row(n))
    };
    for _ in (1..n).rev() {
        let mut next = Vec::new();
        for stack in &partial {
            for row in rows_under(&upper_of(stack)) {
                let mut s = stack.clone();
                s.push(row);
                next.push(s);
            }
        }
        partial = next;
    }
    let mut out: Vec<(Vec<i64>, CPattern)> = partial
        .into_iter()
        .map(|mut stack| {
            stack.reverse();
            let key: Vec<i64> = stack.iter().flatten().copied().collect();
            let p = CPattern::from_rows(sig, stack).expect("rows have the right lengths");
            (key, p)
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, p)| p).collect()
}

/// Position of a pattern in a basis listing.
pub fn basis_index(basis: &[CPattern]) -> std::collections::HashMap<CPattern, usize> {
    basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
}
