use crate::error::{Error, Result};

use super::DenseMatrix;

const ASYMMETRY_TOL: f64 = 1e-12;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix. `vectors` holds the
/// eigenvectors as columns, in the same (ascending) order as `values`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

/// Ascending eigenvalues of a symmetric matrix (cyclic Jacobi).
pub fn eig_symmetric(m: &DenseMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|e| e.values)
}

pub fn eig_symmetric_vectors(m: &DenseMatrix) -> Result<SymmetricEigen> {
    jacobi(m, true)
}

fn jacobi(m: &DenseMatrix, want_vectors: bool) -> Result<SymmetricEigen> {
    if !m.is_square() {
        return Err(Error::dim("symmetric eigenproblem", m.nrows(), m.ncols()));
    }
    let n = m.nrows();
    let norm = m.frobenius_norm();
    let asym = m.asymmetry();
    if asym > ASYMMETRY_TOL * norm {
        return Err(Error::Asymmetric {
            asymmetry: asym / norm,
        });
    }

    let mut a = m.symmetric_part();
    let mut v = if want_vectors {
        DenseMatrix::identity(n)
    } else {
        DenseMatrix::zeros(0, 0)
    };
    let target = OFF_DIAGONAL_TOL * norm;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "cyclic Jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s, t);
                if want_vectors {
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = if want_vectors {
        DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])])
    } else {
        v
    };
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// `A ← Jᵀ A J` with `J` the rotation `[[c, s], [−s, c]]` in the `(p, q)` plane.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let n = a.nrows();
    let apq = a[(p, q)];
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for (j, &x) in a.row(i).iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}


/// Attempts a dense Cholesky factorization; success certifies that a
/// symmetric matrix is positive definite in working precision.
pub fn cholesky_succeeds(m: &DenseMatrix) -> bool {
    if !m.is_square() || m.asymmetry() > ASYMMETRY_TOL * m.frobenius_norm() {
        return false;
    }
    let n = m.nrows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let d = m[(j, j)] - crate::dot(&l.row(j)[..j], &l.row(j)[..j]);
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let s = m[(i, j)] - crate::dot(&l.row(i)[..j], &l.row(j)[..j]);
            l[(i, j)] = s / d;
        }
    }
    true
}
