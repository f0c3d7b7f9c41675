use std::time::Instant;

use super::SolveReport;
use crate::error::{Error, Result};
use crate::norm2;
use crate::precond::MgssPreconditioner;
use crate::saddle::SaddlePointSystem;

/// Residual growth beyond this factor is treated as divergence.
const DIVERGENCE_RATIO: f64 = 1e6;

/// The stationary iteration `M u⁽ᵏ⁺¹⁾ = N u⁽ᵏ⁾ + b`, run as
/// `u ← u + M⁻¹(b − 𝒜u)` until `‖b − 𝒜u⁽ᵏ⁾‖ ≤ tol·‖b − 𝒜u⁽⁰⁾‖`.
///
/// `residual_history` holds the unpreconditioned residual norms, one per
/// sweep. For singular consistent systems the limit depends on `u0`.
pub fn stationary_mgss(
    sys: &SaddlePointSystem,
    pc: &MgssPreconditioner,
    u0: Option<&[f64]>,
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let dim = sys.dim();
    let mut u = match u0 {
        Some(u0) if u0.len() != dim => return Err(Error::dim("initial guess", dim, u0.len())),
        Some(u0) => u0.to_vec(),
        None => vec![0.0; dim],
    };
    let b = sys.rhs();
    let residual = |u: &[f64]| -> Result<Vec<f64>> {
        let au = sys.block().spmv(u)?;
        Ok(b.iter().zip(&au).map(|(x, y)| x - y).collect())
    };

    let mut r = residual(&u)?;
    let r0 = norm2(&r);
    let mut history = vec![r0];
    let mut k = 0;
    let mut converged = r0 == 0.0;
    while !converged && k < max_iter {
        let z = pc.apply(&r)?;
        u.iter_mut().zip(&z).for_each(|(ui, zi)| *ui += zi);
        r = residual(&u)?;
        k += 1;
        let rk = norm2(&r);
        history.push(rk);
        let ratio = rk / r0;
        if ratio.is_nan() || ratio > DIVERGENCE_RATIO {
            return Err(Error::Divergence { iteration: k, ratio });
        }
        converged = ratio <= tol;
    }

    let report = SolveReport {
        converged,
        outer_cycles: k,
        inner_in_last_cycle: usize::from(k > 0),
        total_inner: k,
        r_k: if r0 == 0.0 { 0.0 } else { history[k] / r0 },
        residual_history: history,
        wall_time: start.elapsed(),
        max_consistency_gap: None,
    };
    Ok((u, report))
}
