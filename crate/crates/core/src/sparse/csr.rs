use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

use super::TripletBuffer;

/// Real sparse matrix in compressed sparse row layout.
///
/// Invariants: `row_offsets` has `nrows + 1` nondecreasing entries starting
/// at zero, column indices are strictly increasing within each row and no
/// explicit zeros are produced by the constructors in this module.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSR arrays, checking every layout invariant.
    pub fn from_raw_parts(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 {
            return Err(Error::dim("row_offsets", nrows + 1, row_offsets.len()));
        }
        if col_indices.len() != values.len() {
            return Err(Error::dim("CSR values", col_indices.len(), values.len()));
        }
        if row_offsets[0] != 0 || row_offsets[nrows] != col_indices.len() {
            return Err(Error::Structural(
                "row_offsets must start at 0 and end at nnz".into(),
            ));
        }
        for i in 0..nrows {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            if lo > hi {
                return Err(Error::Structural(format!("row_offsets decrease at row {i}")));
            }
            let cols = &col_indices[lo..hi];
            if cols.iter().any(|&j| j >= ncols) {
                return Err(Error::Structural(format!("column index out of range in row {i}")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structural(format!(
                    "columns not strictly increasing in row {i}"
                )));
            }
        }
        Ok(Self::from_raw_parts_unchecked(
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        ))
    }

    pub(crate) fn from_raw_parts_unchecked(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_raw_parts_unchecked(nrows, ncols, vec![0; nrows + 1], Vec::new(), Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        if s == 0.0 {
            return Self::zeros(n, n);
        }
        Self::from_raw_parts_unchecked(n, n, (0..=n).collect(), (0..n).collect(), vec![s; n])
    }

    /// Sparse image of a dense matrix; exact zeros are not stored.
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut buf = TripletBuffer::new(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0.0 {
                    buf.push(i, j, v);
                }
            }
        }
        buf.to_csr().expect("indices are in range by construction")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates stored entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = M x`, accumulating each row left to right.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::dim("spmv input", self.ncols, x.len()));
        }
        if y.len() != self.nrows {
            return Err(Error::dim("spmv output", self.nrows, y.len()));
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            *yi = acc;
        }
        Ok(())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut col_indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // Rows are visited in increasing order, so each transposed row comes
        // out sorted.
        for (i, j, v) in self.iter() {
            let k = next[j];
            col_indices[k] = i;
            values[k] = v;
            next[j] += 1;
        }
        Self::from_raw_parts_unchecked(self.ncols, self.nrows, counts, col_indices, values)
    }

    pub fn scale(&self, s: f64) -> SparseMatrix {
        if s == 0.0 {
            return Self::zeros(self.nrows, self.ncols);
        }
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        // Underflow can still create zeros.
        if out.values.contains(&0.0) {
            return out.drop_zeros();
        }
        out
    }

    fn drop_zeros(&self) -> SparseMatrix {
        let mut buf = TripletBuffer::with_capacity(self.nrows, self.ncols, self.nnz());
        for (i, j, v) in self.iter() {
            buf.push(i, j, v);
        }
        buf.to_csr().expect("indices are in range by construction")
    }

    /// `a·self + b·other`, merged row by row.
    pub fn add_scaled(&self, a: f64, other: &SparseMatrix, b: f64) -> Result<SparseMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::Structural(format!(
                "cannot add {}x{} and {}x{} matrices",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut row_offsets = Vec::with_capacity(self.nrows + 1);
        let mut col_indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        row_offsets.push(0);
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let (col, v) = if q == cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    p += 1;
                    (ca[p - 1], a * va[p - 1])
                } else if p == ca.len() || cb[q] < ca[p] {
                    q += 1;
                    (cb[q - 1], b * vb[q - 1])
                } else {
                    p += 1;
                    q += 1;
                    (ca[p - 1], a * va[p - 1] + b * vb[q - 1])
                };
                if v != 0.0 {
                    col_indices.push(col);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self::from_raw_parts_unchecked(
            self.nrows,
            self.ncols,
            row_offsets,
            col_indices,
            values,
        ))
    }

    /// Sparse product `self · other`. For a fixed output entry the terms are
    /// accumulated in increasing inner index, so `B·Bᵀ` is exactly symmetric.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::dim("sparse product inner dimension", self.ncols, other.nrows));
        }
        let mut acc = vec![0.0; other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut pattern: Vec<usize> = Vec::new();
        let mut row_offsets = Vec::with_capacity(self.nrows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &b) in cb.iter().zip(vb) {
                    if !touched[j] {
                        touched[j] = true;
                        pattern.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            pattern.sort_unstable();
            for &j in &pattern {
                if acc[j] != 0.0 {
                    col_indices.push(j);
                    values.push(acc[j]);
                }
                acc[j] = 0.0;
                touched[j] = false;
            }
            pattern.clear();
            row_offsets.push(col_indices.len());
        }
        Ok(Self::from_raw_parts_unchecked(
            self.nrows,
            other.ncols,
            row_offsets,
            col_indices,
            values,
        ))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            d[(i, j)] = v;
        }
        d
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖M − Mᵀ‖_F` for a square matrix.
    pub fn asymmetry(&self) -> f64 {
        let t = self.transpose();
        self.add_scaled(1.0, &t, -1.0)
            .map(|d| d.frobenius_norm())
            .unwrap_or(f64::INFINITY)
    }

    /// Stacks `blocks` as a 2x2 block matrix. `None` stands for a zero block.
    pub fn block2x2(
        top_left: &SparseMatrix,
        top_right: Option<&SparseMatrix>,
        bottom_left: Option<&SparseMatrix>,
        bottom_right: Option<&SparseMatrix>,
        bottom_rows: usize,
    ) -> Result<SparseMatrix> {
        let n = top_left.nrows;
        let nc = top_left.ncols;
        let m = bottom_rows;
        let right_cols = top_right
            .map(|b| b.ncols)
            .or(bottom_right.map(|b| b.ncols))
            .unwrap_or(m);
        let check = |b: Option<&SparseMatrix>, r: usize, c: usize| -> Result<()> {
            match b {
                Some(b) if b.shape() != (r, c) => Err(Error::Structural(format!(
                    "block is {}x{}, expected {r}x{c}",
                    b.nrows, b.ncols
                ))),
                _ => Ok(()),
            }
        };
        check(top_right, n, right_cols)?;
        check(bottom_left, m, nc)?;
        check(bottom_right, m, right_cols)?;

        let mut buf = TripletBuffer::with_capacity(n + m, nc + right_cols, top_left.nnz());
        for (i, j, v) in top_left.iter() {
            buf.push(i, j, v);
        }
        if let Some(b) = top_right {
            for (i, j, v) in b.iter() {
                buf.push(i, nc + j, v);
            }
        }
        if let Some(b) = bottom_left {
            for (i, j, v) in b.iter() {
                buf.push(n + i, j, v);
            }
        }
        if let Some(b) = bottom_right {
            for (i, j, v) in b.iter() {
                buf.push(n + i, nc + j, v);
            }
        }
        buf.to_csr()
    }

    /// `diag(self, other)`.
    pub fn block_diag(&self, other: &SparseMatrix) -> SparseMatrix {
        Self::block2x2(self, None, None, Some(other), other.nrows)
            .expect("block shapes are consistent by construction")
    }
}

/// The saddle point matrix `𝒜 = [[A, Bᵀ], [−B, 0]]`.
pub fn assemble_block_saddle(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    if !a.is_square() {
        return Err(Error::dim("A must be square", a.nrows, a.ncols));
    }
    if b.ncols != a.ncols {
        return Err(Error::dim("B columns", a.ncols, b.ncols));
    }
    let bt = b.transpose();
    let neg_b = b.scale(-1.0);
    SparseMatrix::block2x2(a, Some(&bt), Some(&neg_b), None, b.nrows)
}
