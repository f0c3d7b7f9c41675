use crate::error::{Error, Result};

use super::DenseMatrix;

/// Pivot magnitudes below this fraction of `max|M|` count as singular.
const PIVOT_TOL: f64 = 1e-14;

/// Partial-pivoting LU factors `P·M = L·U` stored in one matrix (unit lower
/// triangle implicit).
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    /// `perm[k]` is the original row that ended up in position `k`.
    perm: Vec<usize>,
    sign: f64,
}

pub fn lu_factor(m: &DenseMatrix) -> Result<LuFactors> {
    if !m.is_square() {
        return Err(Error::dim("LU of non-square matrix", m.nrows(), m.ncols()));
    }
    let n = m.nrows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let threshold = PIVOT_TOL * m.max_abs();

    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= threshold || pmax == 0.0 {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            let data = lu.as_mut_slice();
            for j in 0..n {
                data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let data = lu.as_mut_slice();
        let (top, bottom) = data.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n..(k + 1) * n];
        let pivot = pivot_row[k];
        for row in bottom.chunks_exact_mut(n) {
            let l = row[k] / pivot;
            row[k] = l;
            if l != 0.0 {
                for (r, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *r -= l * u;
                }
            }
        }
    }
    Ok(LuFactors { lu, perm, sign })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn permutation_sign(&self) -> f64 {
        self.sign
    }

    /// Combined storage: strict lower triangle is `L`, upper triangle is `U`.
    pub fn combined(&self) -> &DenseMatrix {
        &self.lu
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim()).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::dim("LU right-hand side", n, rhs.len()));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s = crate::dot(&row[..i], &x[..i]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = crate::dot(&row[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves for every column of `rhs` at once.
    pub fn solve_matrix(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if rhs.nrows() != n {
            return Err(Error::dim("LU right-hand side rows", n, rhs.nrows()));
        }
        let k = rhs.ncols();
        let mut x = DenseMatrix::zeros(n, k);
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(rhs.row(p));
        }
        let data = x.as_mut_slice();
        for i in 0..n {
            let (done, rest) = data.split_at_mut(i * k);
            let xi = &mut rest[..k];
            for (j, &l) in self.lu.row(i)[..i].iter().enumerate() {
                if l != 0.0 {
                    for (a, &b) in xi.iter_mut().zip(&done[j * k..(j + 1) * k]) {
                        *a -= l * b;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * k);
            let xi = &mut head[i * k..];
            let row = self.lu.row(i);
            for (off, &u) in row[i + 1..].iter().enumerate() {
                if u != 0.0 {
                    for (a, &b) in xi.iter_mut().zip(&tail[off * k..(off + 1) * k]) {
                        *a -= u * b;
                    }
                }
            }
            let d = row[i];
            xi.iter_mut().for_each(|a| *a /= d);
        }
        Ok(x)
    }

    /// Explicit inverse; only for verification-sized matrices.
    pub fn inverse(&self) -> DenseMatrix {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
            .expect("identity has matching dimension")
    }
}
