//! Eigenvalues of a general real matrix: balancing, Householder reduction to
//! upper Hessenberg form, then Francis implicit double-shift QR with
//! exceptional shifts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::DenseMatrix;

/// Eigenvalues as `(re, im)` pairs, sorted by real then imaginary part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<(f64, f64)>,
    pub iterations_used: usize,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues.iter().map(|&(re, im)| Complex64::new(re, im))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.iter().collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn eig_general(m: &DenseMatrix) -> Result<ComplexSpectrum> {
    if !m.is_square() {
        return Err(Error::dim("eigenvalues of non-square matrix", m.nrows(), m.ncols()));
    }
    if m.nrows() > crate::DENSE_CAP {
        return Err(Error::DimensionCap {
            size: m.nrows(),
            cap: crate::DENSE_CAP,
        });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(ComplexSpectrum::default());
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let (wr, wi, iterations_used) = hqr(&mut a)?;
    let mut eigenvalues: Vec<(f64, f64)> = wr.into_iter().zip(wi).collect();
    eigenvalues.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(ComplexSpectrum {
        eigenvalues,
        iterations_used,
    })
}

/// Similarity scaling by powers of two so that row and column norms are
/// comparable; leaves the spectrum unchanged and is exact in floating point.
fn balance(a: &mut DenseMatrix) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                a.row_mut(i).iter_mut().for_each(|x| *x *= g);
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n - 2 {
        let scale: f64 = (k + 1..n).map(|i| a[(i, k)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut sigma = 0.0;
        for i in k + 1..n {
            v[i] = a[(i, k)] / scale;
            sigma += v[i] * v[i];
        }
        let alpha = sigma.sqrt().copysign(v[k + 1]);
        // P = I − v vᵀ / (σ + α x₁) with v = x + α e₁.
        let half_vtv = sigma + alpha * v[k + 1];
        v[k + 1] += alpha;
        if half_vtv == 0.0 {
            continue;
        }
        let beta = 1.0 / half_vtv;

        // Left: rows k+1.., columns k..
        w[k..n].iter_mut().for_each(|x| *x = 0.0);
        for (i, &vi) in (k + 1..n).zip(&v[k + 1..n]) {
            for (wj, &aij) in w[k..n].iter_mut().zip(&a.row(i)[k..n]) {
                *wj += vi * aij;
            }
        }
        for (i, &vi) in (k + 1..n).zip(&v[k + 1..n]) {
            let f = beta * vi;
            for (aij, &wj) in a.row_mut(i)[k..n].iter_mut().zip(&w[k..n]) {
                *aij -= f * wj;
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut a.row_mut(i)[k + 1..n];
            let s: f64 = row.iter().zip(&v[k + 1..n]).map(|(x, y)| x * y).sum();
            let f = beta * s;
            for (x, &y) in row.iter_mut().zip(&v[k + 1..n]) {
                *x -= f * y;
            }
        }
        a[(k + 1, k)] = -alpha * scale;
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. Returns real and
/// imaginary parts of the eigenvalues and the number of QR sweeps used.
///
/// Indices are 1-based inside this routine (`h(i, j)` maps to `a[(i-1, j-1)]`),
/// which keeps the classic loop bounds readable.
fn hqr(a: &mut DenseMatrix) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let n = a.nrows();
    let max_sweeps = 40 * n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    macro_rules! h {
        ($i:expr, $j:expr) => {
            a[($i - 1, $j - 1)]
        };
    }

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += h!(i, j).abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    let mut total = 0usize;
    let (mut p, mut q, mut r, mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = h!(l - 1, l - 1).abs() + h!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h!(l, l - 1).abs() <= f64::EPSILON * s {
                    h!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            x = h!(nn, nn);
            if l == nn {
                // One root found.
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = h!(nn - 1, nn - 1);
            w = h!(nn, nn - 1) * h!(nn - 1, nn);
            if l == nn - 1 {
                // Two roots found.
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }

            if total >= max_sweeps {
                return Err(Error::NoConvergence {
                    what: "Francis QR",
                    iterations: total,
                });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    h!(i, i) -= x;
                }
                let s = h!(nn, nn - 1).abs() + h!(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;

            // Form the shift and look for two consecutive small subdiagonals.
            let mut m = nn - 2;
            loop {
                z = h!(m, m);
                r = x - z;
                let s = y - z;
                p = (r * s - w) / h!(m + 1, m) + h!(m, m + 1);
                q = h!(m + 1, m + 1) - z - r - s;
                r = h!(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h!(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (h!(m - 1, m - 1).abs() + z.abs() + h!(m + 1, m + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                h!(i, i - 2) = 0.0;
                if i != m + 2 {
                    h!(i, i - 3) = 0.0;
                }
            }

            // Double QR step on rows l..nn and columns m..nn.
            for k in m..nn {
                if k != m {
                    p = h!(k, k - 1);
                    q = h!(k + 1, k - 1);
                    r = 0.0;
                    if k != nn - 1 {
                        r = h!(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        h!(k, k - 1) = -h!(k, k - 1);
                    }
                } else {
                    h!(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    p = h!(k, j) + q * h!(k + 1, j);
                    if k != nn - 1 {
                        p += r * h!(k + 2, j);
                        h!(k + 2, j) -= p * z;
                    }
                    h!(k + 1, j) -= p * y;
                    h!(k, j) -= p * x;
                }
                let mmin = nn.min(k + 3);
                for i in l..=mmin {
                    p = x * h!(i, k) + y * h!(i, k + 1);
                    if k != nn - 1 {
                        p += z * h!(i, k + 2);
                        h!(i, k + 2) -= p * r;
                    }
                    h!(i, k + 1) -= p * q;
                    h!(i, k) -= p;
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    wr.remove(0);
    wi.remove(0);
    Ok((wr, wi, total))
}
