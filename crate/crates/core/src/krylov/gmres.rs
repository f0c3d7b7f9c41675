use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{check_square, LinearOperator, SolveReport};
use crate::error::{Error, Result};
use crate::{dot, norm2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmresConfig {
    /// Krylov dimension per cycle.
    pub restart: usize,
    /// Stop once `‖P⁻¹r_k‖ / ‖P⁻¹r_0‖ ≤ rel_tol`.
    pub rel_tol: f64,
    /// Cap on the total number of inner steps over all cycles.
    pub max_iters: usize,
    /// Recompute the preconditioned residual after every inner step and
    /// record the worst disagreement with the rotated estimate.
    pub audit: bool,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            restart: 5,
            rel_tol: 1e-7,
            max_iters: 1000,
            audit: false,
        }
    }
}

impl GmresConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restart == 0 {
            return Err(Error::InvalidParameter("restart length must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "relative tolerance must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// `P⁻¹(b − 𝒜x)`.
fn precond_residual(
    op: &dyn LinearOperator,
    pc: Option<&dyn LinearOperator>,
    b: &[f64],
    x: &[f64],
) -> Result<Vec<f64>> {
    let ax = op.apply(x)?;
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    match pc {
        Some(p) => p.apply(&r),
        None => Ok(r),
    }
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let h = a.hypot(b);
        (a / h, b / h)
    }
}

/// Solves the leading `k × k` upper triangle of the rotated Hessenberg matrix.
fn back_substitute(h: &[Vec<f64>], g: &[f64], k: usize) -> Vec<f64> {
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| h[i][j] * y[j]).sum();
        y[i] = (g[i] - s) / h[i][i];
    }
    y
}

fn update(x: &[f64], basis: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    for (v, &c) in basis.iter().zip(y) {
        for (o, vi) in out.iter_mut().zip(v) {
            *o += c * vi;
        }
    }
    out
}

/// Restarted GMRES(ℓ) applied to `P⁻¹𝒜x = P⁻¹b` (left preconditioning),
/// with modified Gram–Schmidt Arnoldi and Givens rotations.
///
/// `x0 = None` starts from zero. The preconditioned residual is recomputed
/// at the end of every cycle and replaces the rotated estimate as the last
/// history entry, so `R_k` always refers to an actual iterate. Exhausting
/// the step cap is not an error: the report comes back with
/// `converged = false`.
pub fn gmres_restarted(
    op: &dyn LinearOperator,
    pc: Option<&dyn LinearOperator>,
    b: &[f64],
    x0: Option<&[f64]>,
    cfg: &GmresConfig,
) -> Result<(Vec<f64>, SolveReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let n = b.len();
    check_square(op, n, "operator vs right-hand side")?;
    if let Some(p) = pc {
        check_square(p, n, "preconditioner vs right-hand side")?;
    }
    let mut x = match x0 {
        Some(x0) if x0.len() != n => return Err(Error::dim("initial guess", n, x0.len())),
        Some(x0) => x0.to_vec(),
        None => vec![0.0; n],
    };

    let mut r = precond_residual(op, pc, b, &x)?;
    let beta0 = norm2(&r);
    let mut history = vec![beta0];
    let mut report = SolveReport {
        converged: beta0 == 0.0,
        outer_cycles: 0,
        inner_in_last_cycle: 0,
        total_inner: 0,
        r_k: 0.0,
        residual_history: Vec::new(),
        wall_time: Default::default(),
        max_consistency_gap: cfg.audit.then_some(0.0),
    };
    let ell = cfg.restart;

    while !report.converged && report.total_inner < cfg.max_iters {
        report.outer_cycles += 1;
        report.inner_in_last_cycle = 0;
        let beta = norm2(&r);
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        // Column-major upper Hessenberg, rotated in place: h[i][j].
        let mut h = vec![vec![0.0; ell]; ell + 1];
        let mut cs = vec![(1.0, 0.0); ell];
        let mut g = vec![0.0; ell + 1];
        g[0] = beta;
        let mut k = 0;

        while k < ell && report.total_inner < cfg.max_iters {
            let av = op.apply(&basis[k])?;
            let mut w = match pc {
                Some(p) => p.apply(&av)?,
                None => av,
            };
            for (i, v) in basis.iter().enumerate() {
                let hik = dot(&w, v);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj -= hik * vj;
                }
            }
            let wnorm = norm2(&w);
            h[k + 1][k] = wnorm;
            for (i, &(c, s)) in cs.iter().enumerate().take(k) {
                let (a, bb) = (h[i][k], h[i + 1][k]);
                h[i][k] = c * a + s * bb;
                h[i + 1][k] = -s * a + c * bb;
            }
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            cs[k] = (c, s);
            h[k][k] = c * h[k][k] + s * h[k + 1][k];
            h[k + 1][k] = 0.0;
            g[k + 1] = -s * g[k];
            g[k] *= c;
            k += 1;
            report.total_inner += 1;
            report.inner_in_last_cycle += 1;
            let estimate = g[k].abs();
            history.push(estimate);

            if cfg.audit {
                let xk = update(&x, &basis, &back_substitute(&h, &g, k));
                let actual = norm2(&precond_residual(op, pc, b, &xk)?);
                let gap = (actual - estimate).abs() / beta0;
                let worst = report.max_consistency_gap.get_or_insert(0.0);
                *worst = worst.max(gap);
            }

            let breakdown = wnorm <= 1e-14 * beta0;
            if estimate <= cfg.rel_tol * beta0 || breakdown {
                break;
            }
            basis.push(w.iter().map(|v| v / wnorm).collect());
        }

        x = update(&x, &basis, &back_substitute(&h, &g, k));
        r = precond_residual(op, pc, b, &x)?;
        let actual = norm2(&r);
        *history.last_mut().expect("history is never empty") = actual;
        report.converged = actual <= cfg.rel_tol * beta0;
    }

    report.r_k = if beta0 == 0.0 {
        0.0
    } else {
        history.last().copied().unwrap_or(0.0) / beta0
    };
    report.residual_history = history;
    report.wall_time = start.elapsed();
    Ok((x, report))
}
