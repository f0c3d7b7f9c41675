use crate::error::{Error, Result};

use super::SparseMatrix;

/// Coordinate-format staging area. Duplicate entries are allowed and summed
/// when the buffer is converted to CSR.
#[derive(Debug, Clone, Default)]
pub struct TripletBuffer {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuffer {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, capacity: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::with_capacity(capacity),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        self.entries.push((row, col, value));
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sums duplicates, sorts each row by column and drops entries whose sum
    /// is exactly zero.
    pub fn to_csr(&self) -> Result<SparseMatrix> {
        for &(i, j, _) in &self.entries {
            if i >= self.nrows || j >= self.ncols {
                return Err(Error::Structural(format!(
                    "entry ({i}, {j}) outside a {}x{} shape",
                    self.nrows, self.ncols
                )));
            }
        }

        // Counting sort by row keeps insertion order within a row, so the
        // duplicate sums below are accumulated in insertion order.
        let mut counts = vec![0usize; self.nrows + 1];
        for &(i, _, _) in &self.entries {
            counts[i + 1] += 1;
        }
        for i in 0..self.nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut by_row = vec![(0usize, 0.0f64); self.entries.len()];
        for &(i, j, v) in &self.entries {
            by_row[next[i]] = (j, v);
            next[i] += 1;
        }

        let mut row_offsets = Vec::with_capacity(self.nrows + 1);
        let mut col_indices = Vec::with_capacity(self.entries.len());
        let mut values = Vec::with_capacity(self.entries.len());
        row_offsets.push(0);
        for i in 0..self.nrows {
            let row = &mut by_row[counts[i]..counts[i + 1]];
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let col = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == col {
                    sum += row[k].1;
                    k += 1;
                }
                if sum != 0.0 {
                    col_indices.push(col);
                    values.push(sum);
                }
            }
            row_offsets.push(col_indices.len());
        }

        Ok(SparseMatrix::from_raw_parts_unchecked(
            self.nrows,
            self.ncols,
            row_offsets,
            col_indices,
            values,
        ))
    }
}

impl TryFrom<&TripletBuffer> for SparseMatrix {
    type Error = Error;

    fn try_from(buf: &TripletBuffer) -> Result<Self> {
        buf.to_csr()
    }
}
