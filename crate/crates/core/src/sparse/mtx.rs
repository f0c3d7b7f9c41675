//! Matrix Market coordinate I/O (`real general` and `real symmetric`).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{SparseMatrix, TripletBuffer};

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse(&text, path)
}

/// Writes `m` as `real general` with 17 significant digits, which is enough
/// for every `f64` to survive the round trip bit for bit.
pub fn write_matrix_market(m: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_string(m))?;
    Ok(())
}

impl SparseMatrix {
    pub fn to_matrix_market(&self) -> String {
        to_string(self)
    }

    pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix> {
        parse(text, Path::new("<memory>"))
    }
}

fn to_string(m: &SparseMatrix) -> String {
    let mut out = String::with_capacity(64 + 40 * m.nnz());
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz());
    for (i, j, v) in m.iter() {
        let _ = writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v);
    }
    out
}

fn parse(text: &str, path: &Path) -> Result<SparseMatrix> {
    let err = |line: usize, msg: String| Error::MatrixMarket {
        path: PathBuf::from(path),
        line,
        msg,
    };

    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(1, format!("malformed header `{header}`")));
    }
    if tokens[2] != "coordinate" {
        return Err(err(1, format!("unsupported format `{}`", tokens[2])));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(err(1, format!("unsupported field `{}`", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(err(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| err(2, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(size_line, format!("bad size line: {e}")))?;
    if dims.len() != 3 {
        return Err(err(size_line, "size line needs `rows cols nnz`".into()));
    }
    let (nrows, ncols, nnz) = (dims[0], dims[1], dims[2]);
    if symmetric && nrows != ncols {
        return Err(err(size_line, "symmetric matrix must be square".into()));
    }

    let mut buf = TripletBuffer::with_capacity(nrows, ncols, if symmetric { 2 * nnz } else { nnz });
    let mut seen = 0;
    for (line, l) in body {
        let mut it = l.split_whitespace();
        let mut index = |name: &str, bound: usize| -> Result<usize> {
            let tok = it.next().ok_or_else(|| err(line, format!("missing {name} index")))?;
            let k: usize = tok
                .parse()
                .map_err(|_| err(line, format!("bad {name} index `{tok}`")))?;
            if k == 0 || k > bound {
                return Err(err(line, format!("{name} index {k} outside 1..={bound}")));
            }
            Ok(k - 1)
        };
        let i = index("row", nrows)?;
        let j = index("column", ncols)?;
        let tok = it.next().ok_or_else(|| err(line, "missing value".into()))?;
        let v: f64 = tok.parse().map_err(|_| err(line, format!("bad value `{tok}`")))?;
        if it.next().is_some() {
            return Err(err(line, "trailing tokens (complex entry?)".into()));
        }
        buf.push(i, j, v);
        if symmetric && i != j {
            buf.push(j, i, v);
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(err(size_line, format!("declared {nnz} entries, found {seen}")));
    }
    buf.to_csr()
}
