//! Plain-text pattern files.
//!
//! ```text
//! depth 2 sig ls.json
//! 0
//! 0 0
//! ```
//!
//! The header names the stored depth and a signature label; then one line per
//! stored row, row 1 first, entries as space-separated integer offsets.

use super::pattern::CPattern;
use super::signature::Signature;
use super::PatternError;

pub fn write_pattern(p: &CPattern, sig_label: &str) -> String {
    let mut out = format!("depth {} sig {}\n", p.depth(), sig_label);
    for row in p.stored_rows() {
        let xs: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&xs.join(" "));
        out.push('\n');
    }
    out
}

/// Parse a pattern file; returns the normalized pattern and the signature label.
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<(CPattern, String), PatternError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| PatternError::Malformed("empty pattern file".into()))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let (depth, label) = match words.as_slice() {
        ["depth", d, "sig", label @ ..] if !label.is_empty() => (
            d.parse::<usize>()
                .map_err(|_| PatternError::Malformed(format!("bad depth {d:?}")))?,
            label.join(" "),
        ),
        _ => return Err(PatternError::Malformed(format!("bad header {header:?}"))),
    };
    let mut rows = Vec::new();
    for line in lines {
        let row: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse::<i64>).collect();
        rows.push(row.map_err(|_| PatternError::Malformed(format!("bad row {line:?}")))?);
    }
    if rows.len() != depth {
        return Err(PatternError::Malformed(format!(
            "header says depth {depth}, found {} rows",
            rows.len()
        )));
    }
    Ok((CPattern::from_rows(sig, rows)?, label))
}

/// One-line form `[r1 | r2 | ...]`, as printed by `Display`.
pub fn parse_pattern_line(line: &str, sig: &Signature) -> Result<CPattern, PatternError> {
    let inner = line
        .trim()
        .strip_prefix('[')
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(|| PatternError::Malformed(format!("bad pattern line {line:?}")))?;
    if inner.trim().is_empty() {
        return Ok(CPattern::highest_weight(sig));
    }
    let mut rows = Vec::new();
    for part in inner.split('|') {
        let row: Result<Vec<i64>, _> = part.split_whitespace().map(str::parse::<i64>).collect();
        rows.push(row.map_err(|_| PatternError::Malformed(format!("bad row {part:?}")))?);
    }
    CPattern::from_rows(sig, rows)
}

/// Basis listing: a count header, then one pattern per line.
pub fn write_basis(basis: &[CPattern], n: usize, sig_label: &str) -> String {
    let mut out = format!("basis N={n} dim={} sig {sig_label}\n", basis.len());
    for p in basis {
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// Inverse of [`write_basis`]; returns `(N, patterns, label)`.
pub fn parse_basis(text: &str, sig: &Signature) -> Result<(usize, Vec<CPattern>, String), PatternError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| PatternError::Malformed("empty listing".into()))?;
    let bad = || PatternError::Malformed(format!("bad header {header:?}"));
    let words: Vec<&str> = header.split_whitespace().collect();
    let (n, dim, label) = match words.as_slice() {
        ["basis", n, d, "sig", label @ ..] => (
            n.strip_prefix("N=").and_then(|x| x.parse::<usize>().ok()).ok_or_else(bad)?,
            d.strip_prefix("dim=").and_then(|x| x.parse::<usize>().ok()).ok_or_else(bad)?,
            label.join(" "),
        ),
        _ => return Err(bad()),
    };
    let pats = lines.map(|l| parse_pattern_line(l, sig)).collect::<Result<Vec<_>, _>>()?;
    if pats.len() != dim {
        return Err(PatternError::Malformed(format!("header says {dim} patterns, found {}", pats.len())));
    }
    Ok((n, pats, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::basis::enumerate_basis;

    #[test]
    fn roundtrip_window() {
        let sig = Signature::simple(-1, 1, vec![2, 1, 0]).unwrap();
        for p in enumerate_basis(&sig, 4) {
            let text = write_pattern(&p, "b.json");
            let (back, label) = parse_pattern(&text, &sig).unwrap();
            assert_eq!(back, p);
            assert_eq!(label, "b.json");
        }
    }

    #[test]
    fn listing_roundtrip() {
        let sig = Signature::levendorskii_soibelman(0);
        let basis = enumerate_basis(&sig, 4);
        let text = write_basis(&basis, 4, "ls0");
        let (n, back, label) = parse_basis(&text, &sig).unwrap();
        assert_eq!((n, back, label.as_str()), (4, basis, "ls0"));
        assert!(parse_basis("basis N=1 dim=2 sig x\n[0]\n", &Signature::trivial()).is_err());
        assert!(parse_pattern_line("0 1", &sig).is_err());
    }

    #[test]
    fn malformed_inputs() {
        let sig = Signature::trivial();
        assert!(parse_pattern("", &sig).is_err());
        assert!(parse_pattern("depth 1\n0\n", &sig).is_err());
        assert!(parse_pattern("depth 2 sig x\n0\n", &sig).is_err());
        assert!(parse_pattern("depth 1 sig x\n0 1\n", &sig).is_err());
        assert!(parse_pattern("depth 1 sig x\na\n", &sig).is_err());
    }
}
