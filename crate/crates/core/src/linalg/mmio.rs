//! Matrix Market coordinate files (`real general` and `real symmetric`).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses Matrix Market text. Symmetric storage is expanded to full.
pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let fields: Vec<String> = header.split_whitespace().map(|f| f.to_ascii_lowercase()).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(hline, "expected '%%MatrixMarket matrix ...' header"));
    }
    if fields[2] != "coordinate" {
        return Err(parse_err(hline, format!("unsupported layout '{}'", fields[2])));
    }
    if fields[3] != "real" {
        return Err(parse_err(hline, format!("unsupported field '{}'", fields[3])));
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(hline, format!("unsupported symmetry '{other}'"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = data.next().ok_or_else(|| parse_err(hline + 1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(sline, format!("bad size line: {e}")))?;
    if dims.len() != 3 {
        return Err(parse_err(sline, "size line must hold rows, columns and entry count"));
    }
    let (nrows, ncols, nnz) = (dims[0], dims[1], dims[2]);
    if symmetric && nrows != ncols {
        return Err(parse_err(sline, "symmetric matrix must be square"));
    }

    let mut triplets = Vec::with_capacity(if symmetric { 2 * nnz } else { nnz });
    let mut seen = 0;
    for (ln, l) in data {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "entry line must hold row, column and value"));
        }
        let r: usize = toks[0].parse().map_err(|_| parse_err(ln, format!("bad row index '{}'", toks[0])))?;
        let c: usize = toks[1].parse().map_err(|_| parse_err(ln, format!("bad column index '{}'", toks[1])))?;
        let v: f64 = toks[2].parse().map_err(|_| parse_err(ln, format!("bad value '{}'", toks[2])))?;
        if r == 0 || c == 0 || r > nrows || c > ncols {
            return Err(parse_err(ln, format!("index ({r}, {c}) outside {nrows}x{ncols}")));
        }
        if !v.is_finite() {
            return Err(parse_err(ln, "non-finite value"));
        }
        if symmetric && c > r {
            return Err(parse_err(ln, "symmetric storage must be lower triangular"));
        }
        triplets.push((r - 1, c - 1, v));
        if symmetric && r != c {
            triplets.push((c - 1, r - 1, v));
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(parse_err(sline, format!("declared {nnz} entries, found {seen}")));
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

pub fn matrix_market_read(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

/// Serializes in `coordinate real general` form with round-trip exact
/// values.
pub fn format_matrix_market(a: &SparseMatrix) -> String {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz());
    for (r, c, v) in a.triplets() {
        let _ = writeln!(out, "{} {} {:e}", r + 1, c + 1, v);
    }
    out
}

pub fn matrix_market_write(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix_market(a))?;
    Ok(())
}
