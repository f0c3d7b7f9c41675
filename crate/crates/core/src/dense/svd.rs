//! Singular values by one-sided (Hestenes) Jacobi.
//!
//! Orthogonalizing the columns of the matrix itself keeps tiny singular
//! values accurate to roughly `ε·σ_max`, which the rank decisions rely on.

use super::DenseMatrix;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order; `min(nrows, ncols)` of them.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    // Work on whichever orientation has fewer columns.
    let (cols, len) = if m.ncols() <= m.nrows() {
        let cols: Vec<Vec<f64>> = (0..m.ncols()).map(|j| m.column(j)).collect();
        (cols, m.nrows())
    } else {
        let cols: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
        (cols, m.ncols())
    };
    let mut cols = cols;
    let k = cols.len();
    let tol = f64::EPSILON * (len.max(1) as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (head, tail) = cols.split_at_mut(q);
                let (cp, cq) = (&mut head[p], &mut tail[0]);
                let alpha = crate::dot(cp, cp);
                let beta = crate::dot(cq, cq);
                let gamma = crate::dot(cp, cq);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = c * a - s * b;
                    *y = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols.iter().map(|c| crate::norm2(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `max(nrows, ncols)·ε·σ_max`.
pub fn default_rank_tolerance(m: &DenseMatrix, sigma_max: f64) -> f64 {
    m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sigma_max
}

/// Numerical rank with the default tolerance.
pub fn rank(m: &DenseMatrix) -> usize {
    let sv = singular_values(m);
    let tol = default_rank_tolerance(m, sv.first().copied().unwrap_or(0.0));
    sv.iter().filter(|&&s| s > tol).count()
}

/// Number of singular values strictly above `tol`.
pub fn rank_with_tol(m: &DenseMatrix, tol: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > tol).count()
}
