//! Complex shifted solves, used to recover eigenvectors by inverse iteration.

use num_complex::Complex64;

use super::DenseMatrix;

/// Unit-norm eigenvector estimate together with its residual
/// `‖M v − λ v‖₂`.
#[derive(Debug, Clone)]
pub struct EigenVector {
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// Inverse iteration for the eigenvalue closest to `shift`. The shift is
/// nudged by a relative `1e-10` so that `M − shift·I` stays invertible even
/// when `shift` is an exact eigenvalue. Returns `None` when the shifted
/// matrix is numerically singular beyond repair or the iteration stagnates
/// above `tol` (a defective eigenvalue, typically).
pub fn inverse_iteration(m: &DenseMatrix, shift: Complex64, tol: f64) -> Option<EigenVector> {
    let n = m.nrows();
    if n == 0 || !m.is_square() {
        return None;
    }
    let norm = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let nudge = 1e-10 * norm.max(shift.norm()).max(1.0);
    let sigma = shift + Complex64::new(nudge, 0.5 * nudge);
    let lu = ComplexLu::factor(m, sigma)?;

    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * ((i * 7 + 3) % 11) as f64, 0.05 * (i % 5) as f64))
        .collect();
    normalize(&mut v);
    let mut best: Option<EigenVector> = None;
    for _ in 0..8 {
        v = lu.solve(&v);
        if !normalize(&mut v) {
            return best;
        }
        let residual = residual(m, &v, shift);
        let better = best.as_ref().is_none_or(|b| residual < b.residual);
        if better {
            best = Some(EigenVector {
                vector: v.clone(),
                residual,
            });
        }
        if residual <= 1e-3 * tol {
            break;
        }
    }
    best.filter(|b| b.residual <= tol)
}

fn normalize(v: &mut [Complex64]) -> bool {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !s.is_finite() || s == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|z| *z /= s);
    true
}

fn residual(m: &DenseMatrix, v: &[Complex64], lambda: Complex64) -> f64 {
    (0..m.nrows())
        .map(|i| {
            let mv: Complex64 = m.row(i).iter().zip(v).map(|(&a, z)| z * a).sum();
            (mv - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// LU with partial pivoting of `M − σ I` in complex arithmetic.
struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl ComplexLu {
    fn factor(m: &DenseMatrix, sigma: Complex64) -> Option<Self> {
        let n = m.nrows();
        let mut lu: Vec<Complex64> = m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for i in 0..n {
            lu[i * n + i] -= sigma;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))
                .unwrap_or(k);
            if lu[p * n + k].norm() == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= l * u;
                    }
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&x[..i]).map(|(l, xj)| l * xj).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, xj)| u * xj).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }
}
