//! C-patterns: finite-depth integer trapezoids over a signature.
//!
//! Row `r` (counted from 1) holds `r` offsets for the indices
//! `-floor(r/2) ..= floor((r-1)/2)`. Rows deeper than the stored depth are the
//! signature rows. Adjacent rows interlace:
//! `upper[p] >= lower[p] >= upper[p + 1]` with `upper` one row deeper.
//!
//! A `CPattern` does not own its signature; operations that need it take
//! `&Signature` explicitly. The stored depth is always minimal.

use std::fmt;

use super::signature::{row_indices, row_position, Signature};
use super::weight::WeightValue;
use super::PatternError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CPattern {
    rows: Vec<Vec<i64>>,
}

/// A betweenness or shape violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RowLength { row: usize, expected: usize, found: usize },
    Betweenness { lower_row: usize, index: i64 },
    NotNormalized { depth: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowLength { row, expected, found } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            Violation::Betweenness { lower_row, index } => write!(
                f,
                "betweenness fails between rows ({lower_row},{}) at index {index}",
                lower_row + 1
            ),
            Violation::NotNormalized { depth } => {
                write!(f, "row {depth} equals the signature row; depth is not minimal")
            }
        }
    }
}

/// Interlacing of `lower` (row `r`) under `upper` (row `r + 1`); returns the
/// first failing position.
fn interlace_failure(lower: &[i64], upper: &[i64]) -> Option<usize> {
    (0..lower.len()).find(|&p| !(upper[p] >= lower[p] && lower[p] >= upper[p + 1]))
}

impl CPattern {
    /// The all-signature pattern.
    pub fn highest_weight(sig: &Signature) -> Self {
        CPattern {
            rows: vec![sig.row(1)],
        }
    }

    /// Build from explicit rows (top row first, i.e. row 1 first) and
    /// normalize. Betweenness is not checked; see [`CPattern::validate`].
    pub fn from_rows(sig: &Signature, rows: Vec<Vec<i64>>) -> Result<Self, PatternError> {
        if rows.is_empty() {
            return Err(PatternError::Malformed("pattern needs at least one row".into()));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(PatternError::Malformed(format!(
                    "row {} has {} entries, expected {}",
                    k + 1,
                    row.len(),
                    k + 1
                )));
            }
        }
        Ok(Self::normalized(sig, rows))
    }

    /// Build without normalizing (used to exhibit violations).
    pub fn raw(rows: Vec<Vec<i64>>) -> Self {
        CPattern { rows }
    }

    fn normalized(sig: &Signature, mut rows: Vec<Vec<i64>>) -> Self {
        while rows.len() > 1 && rows[rows.len() - 1] == sig.row(rows.len()) {
            rows.pop();
        }
        CPattern { rows }
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    pub fn stored_rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Row `r`, resolved against the signature beyond the stored depth.
    pub fn row(&self, sig: &Signature, r: usize) -> Vec<i64> {
        if r >= 1 && r <= self.rows.len() {
            self.rows[r - 1].clone()
        } else {
            sig.row(r)
        }
    }

    /// Integer offset `o_{i,r}`.
    pub fn entry(&self, sig: &Signature, i: i64, r: usize) -> Result<i64, PatternError> {
        if r == 0 {
            return Err(PatternError::OutOfShape { i, r });
        }
        let p = row_position(i, r).ok_or(PatternError::OutOfShape { i, r })?;
        Ok(if r <= self.rows.len() {
            self.rows[r - 1][p]
        } else {
            sig.value(i)
        })
    }

    /// `L_{i,r} - mu = o_{i,r} - i`; the part that enters every bracket.
    pub fn l_offset(&self, sig: &Signature, i: i64, r: usize) -> Result<i64, PatternError> {
        Ok(self.entry(sig, i, r)? - i)
    }

    /// `L_{i,r} = M_{i,r} - i` as an exact weight value.
    pub fn l_value(&self, sig: &Signature, i: i64, r: usize) -> Result<WeightValue, PatternError> {
        Ok(&sig.mu_weight() + &WeightValue::int(self.l_offset(sig, i, r)?))
    }

    /// Sum of the offsets in row `r`.
    pub fn row_sum(&self, sig: &Signature, r: usize) -> i64 {
        if r == 0 {
            0
        } else {
            self.row(sig, r).iter().sum()
        }
    }

    /// All violations of shape, betweenness and minimal depth.
    pub fn validate(&self, sig: &Signature) -> Vec<Violation> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            if row.len() != k + 1 {
                out.push(Violation::RowLength {
                    row: k + 1,
                    expected: k + 1,
                    found: row.len(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for r in 1..=self.rows.len() {
            let lower = self.row(sig, r);
            let upper = self.row(sig, r + 1);
            for p in 0..lower.len() {
                if !(upper[p] >= lower[p] && lower[p] >= upper[p + 1]) {
                    out.push(Violation::Betweenness {
                        lower_row: r,
                        index: *row_indices(r).start() + p as i64,
                    });
                }
            }
        }
        let d = self.rows.len();
        if d > 1 && self.rows[d - 1] == sig.row(d) {
            out.push(Violation::NotNormalized { depth: d });
        }
        out
    }

    pub fn is_valid(&self, sig: &Signature) -> bool {
        self.validate(sig).is_empty()
    }

    /// Move `o_{j,r}` by `delta`; `None` when the result breaks betweenness
    /// (the deletion convention) or `(j, r)` is out of shape.
    pub fn shift(&self, sig: &Signature, j: i64, r: usize, delta: i64) -> Option<CPattern> {
        self.shift_many(sig, &[(j, r, delta)])
    }

    /// Apply several shifts at once, then check the affected row pairs.
    pub fn shift_many(&self, sig: &Signature, moves: &[(i64, usize, i64)]) -> Option<CPattern> {
        let max_r = moves.iter().map(|m| m.1).max()?;
        if moves.iter().any(|m| m.1 == 0) {
            return None;
        }
        let depth = self.rows.len().max(max_r);
        let mut rows: Vec<Vec<i64>> = (1..=depth).map(|r| self.row(sig, r)).collect();
        for &(j, r, delta) in moves {
            let p = row_position(j, r)?;
            rows[r - 1][p] += delta;
        }
        let row_at = |r: usize| -> Vec<i64> {
            if r <= depth {
                rows[r - 1].clone()
            } else {
                sig.row(r)
            }
        };
        for &(_, r, _) in moves {
            if r >= 2 && interlace_failure(&row_at(r - 1), &row_at(r)).is_some() {
                return None;
            }
            if interlace_failure(&row_at(r), &row_at(r + 1)).is_some() {
                return None;
            }
        }
        Some(Self::normalized(sig, rows))
    }

    /// Minimal `N` such that rows `>= N` equal the signature, floored at 2.
    pub fn depth_requirement(&self) -> usize {
        (self.rows.len() + 1).max(2)
    }

    /// True when the pattern lies in `V_N` (rows `>= N` equal the signature).
    pub fn in_window(&self, sig: &Signature, n: usize) -> bool {
        self.rows.len() < n || (self.rows.len() == 1 && self.rows[0] == sig.row(1))
    }

    /// Materialized rows `1..=depth`, used as the basis sort key.
    pub fn sort_key(&self, sig: &Signature, depth: usize) -> Vec<i64> {
        (1..=depth).flat_map(|r| self.row(sig, r)).collect()
    }
}

impl fmt::Display for CPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}
