//! Sparse matrix export of a generator on a window basis.
//!
//! ```text
//! matrix f-1 sig=3fa2c1d09b4e N=3 dim=3 rows=3
//! 1 0 (1)*sqrt{1}
//! ```
//!
//! Column = position of the source pattern in `enumerate_basis(sig, N)`, row =
//! position of the target in `enumerate_basis(sig, N')` with
//! `N' = max(N, 2|k| + 3)` for `e_k`/`f_k` and `N' = N` for diagonal
//! generators. Numeric exports print `re im` instead of the exact scalar.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::patterns::basis::{basis_index, enumerate_basis};
use crate::qarith::RadicalScalar;

use super::engine::{ActionError, Engine};
use super::lincomb::LinComb;
use super::word::{apply_symbol, Exact, GenSymbol};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("malformed matrix file: {0}")]
    Parse(String),
    #[error("target pattern {0} is outside the growth window")]
    OutsideWindow(String),
    #[error("unsupported generator {0}")]
    Generator(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixEntry {
    Exact(RadicalScalar),
    Numeric(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub gen: String,
    pub sig_digest: String,
    pub n: usize,
    pub dim: usize,
    pub rows: usize,
    /// `(row, col, value)`, sorted by column then row.
    pub entries: Vec<(usize, usize, MatrixEntry)>,
}

/// Codomain window for a generator on `V_N`.
pub fn growth_window(gen: &GenSymbol, n: usize) -> usize {
    match gen {
        GenSymbol::E(k) | GenSymbol::F(k) => n.max(2 * k.unsigned_abs() as usize + 3),
        _ => n,
    }
}

pub fn gen_name(gen: &GenSymbol) -> Result<String, ExportError> {
    match gen {
        GenSymbol::DiagScale(_) => Err(ExportError::Generator(gen.to_string())),
        g => Ok(g.to_string()),
    }
}

/// Parse `e3`, `f-1`, `h0`, `c`.
pub fn parse_gen(s: &str) -> Result<GenSymbol, ExportError> {
    let bad = || ExportError::Generator(s.to_string());
    if s == "c" {
        return Ok(GenSymbol::C);
    }
    let (head, tail) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
    let k: i64 = tail.parse().map_err(|_| bad())?;
    match head {
        "e" => Ok(GenSymbol::E(k)),
        "f" => Ok(GenSymbol::F(k)),
        "h" => Ok(GenSymbol::H(k)),
        _ => Err(bad()),
    }
}

/// Exact matrix of `gen` on `V_N`.
pub fn export_matrix(eng: &Engine, gen: &GenSymbol, n: usize) -> Result<SparseMatrix, ExportError> {
    export_with(eng, gen, n, |c| MatrixEntry::Exact(c.to_radical()))
}

/// The same matrix with entries evaluated at `v0`.
pub fn export_matrix_numeric(
    eng: &Engine,
    gen: &GenSymbol,
    n: usize,
    v0: Complex64,
) -> Result<SparseMatrix, ExportError> {
    export_with(eng, gen, n, |c| MatrixEntry::Numeric(c.eval(v0)))
}

fn export_with(
    eng: &Engine,
    gen: &GenSymbol,
    n: usize,
    entry: impl Fn(&crate::qarith::CycloScalar) -> MatrixEntry,
) -> Result<SparseMatrix, ExportError> {
    let name = gen_name(gen)?;
    let sig = eng.sig();
    let source = enumerate_basis(sig, n);
    let target = enumerate_basis(sig, growth_window(gen, n));
    let index = basis_index(&target);
    let mut entries = Vec::new();
    for (col, p) in source.iter().enumerate() {
        let image = apply_symbol(eng, &Exact, gen, &LinComb::basis(p.clone()))?;
        let mut column: Vec<(usize, MatrixEntry)> = Vec::new();
        for (t, c) in image.terms() {
            if c.is_zero() {
                continue;
            }
            let row = *index.get(t).ok_or_else(|| ExportError::OutsideWindow(t.to_string()))?;
            column.push((row, entry(c)));
        }
        column.sort_by_key(|e| e.0);
        entries.extend(column.into_iter().map(|(r, e)| (r, col, e)));
    }
    Ok(SparseMatrix {
        gen: name,
        sig_digest: sig.digest(),
        n,
        dim: source.len(),
        rows: target.len(),
        entries,
    })
}

impl SparseMatrix {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "matrix {} sig={} N={} dim={} rows={}\n",
            self.gen, self.sig_digest, self.n, self.dim, self.rows
        );
        for (r, c, e) in &self.entries {
            match e {
                MatrixEntry::Exact(x) => writeln!(out, "{r} {c} {x}").unwrap(),
                MatrixEntry::Numeric(z) => writeln!(out, "{r} {c} {:e} {:e}", z.re, z.im).unwrap(),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<SparseMatrix, ExportError> {
        let bad = |m: &str| ExportError::Parse(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty"))?.split_whitespace().collect();
        if header.len() != 6 || header[0] != "matrix" {
            return Err(bad("bad header"));
        }
        let field = |tok: &str, key: &str| -> Result<String, ExportError> {
            tok.strip_prefix(key)
                .map(str::to_string)
                .ok_or_else(|| ExportError::Parse(format!("expected {key}")))
        };
        let num = |s: String| s.parse::<usize>().map_err(|_| bad("bad number"));
        let mut m = SparseMatrix {
            gen: header[1].to_string(),
            sig_digest: field(header[2], "sig=")?,
            n: num(field(header[3], "N=")?)?,
            dim: num(field(header[4], "dim=")?)?,
            rows: num(field(header[5], "rows=")?)?,
            entries: vec![],
        };
        for line in lines {
            let mut it = line.splitn(3, ' ');
            let r = num(it.next().unwrap_or("").to_string())?;
            let c = num(it.next().ok_or_else(|| bad("missing column"))?.to_string())?;
            let rest = it.next().ok_or_else(|| bad("missing value"))?;
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let numeric = parts.len() == 2 && parts.iter().all(|p| p.parse::<f64>().is_ok());
            let e = if numeric {
                MatrixEntry::Numeric(Complex64::new(parts[0].parse().unwrap(), parts[1].parse().unwrap()))
            } else {
                MatrixEntry::Exact(RadicalScalar::parse(rest).map_err(|e| ExportError::Parse(e.to_string()))?)
            };
            m.entries.push((r, c, e));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Signature;
    use crate::qarith::EvalNumeric;

    #[test]
    fn ls_f_minus_one() {
        let eng = Engine::new(Signature::levendorskii_soibelman(0));
        let m = export_matrix(&eng, &GenSymbol::F(-1), 3).unwrap();
        // codomain is V_5 (growth bound 2|k| + 3)
        assert_eq!((m.dim, m.rows), (3, 10));
        let text = m.to_text();
        assert!(text.starts_with(&format!("matrix f-1 sig={} N=3 dim=3 rows=10\n", m.sig_digest)));
        assert_eq!(SparseMatrix::parse(&text).unwrap(), m);
    }

    #[test]
    fn numeric_export_agrees_with_exact() {
        let sig = Signature::simple(-1, 1, vec![2, 1, 0]).unwrap();
        let eng = Engine::new(sig);
        let v0 = Complex64::new(1.1, 0.0);
        for gen in [GenSymbol::E(0), GenSymbol::F(1), GenSymbol::F(-2), GenSymbol::H(0)] {
            let a = export_matrix(&eng, &gen, 3).unwrap();
            let b = export_matrix_numeric(&eng, &gen, 3, v0).unwrap();
            assert_eq!(a.entries.len(), b.entries.len());
            for ((r1, c1, x), (r2, c2, y)) in a.entries.iter().zip(&b.entries) {
                assert_eq!((r1, c1), (r2, c2));
                let (MatrixEntry::Exact(x), MatrixEntry::Numeric(y)) = (x, y) else { panic!() };
                assert!((x.eval_numeric(v0).unwrap().value - y).norm() < 1e-9);
            }
            let back = SparseMatrix::parse(&b.to_text()).unwrap();
            assert_eq!(back.entries.len(), b.entries.len());
        }
    }

    #[test]
    fn generator_names() {
        for s in ["e3", "f-1", "h0", "c"] {
            assert_eq!(gen_name(&parse_gen(s).unwrap()).unwrap(), s);
        }
        assert!(parse_gen("x1").is_err());
        assert!(parse_gen("e").is_err());
    }
}
