//! Left-preconditioned restarted GMRES and the stationary MGSS iteration.

mod gmres;
mod stationary;

pub use gmres::{gmres_restarted, GmresConfig};
pub use stationary::stationary_mgss;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Anything that maps a vector of length `dim` to another of the same length.
/// Preconditioners implement it by applying `P⁻¹`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.spmv(x)
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.matvec(x)
    }
}

pub(crate) fn check_square(op: &dyn LinearOperator, len: usize, what: &'static str) -> Result<()> {
    if op.dim() != len {
        return Err(Error::dim(what, op.dim(), len));
    }
    Ok(())
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolveReport {
    pub converged: bool,
    /// Index of the final restart cycle (stationary: number of sweeps).
    pub outer_cycles: usize,
    /// Inner steps taken in the final cycle.
    pub inner_in_last_cycle: usize,
    pub total_inner: usize,
    /// Final relative residual, `residual_history.last / residual_history.first`.
    #[serde(rename = "R_k")]
    pub r_k: f64,
    pub residual_history: Vec<f64>,
    #[serde(with = "seconds")]
    pub wall_time: Duration,
    /// Largest gap between the Givens-rotated residual estimate and the
    /// recomputed preconditioned residual, relative to the initial one.
    /// Only filled when auditing is switched on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_consistency_gap: Option<f64>,
}

impl SolveReport {
    /// `a(b)` with `a` the final cycle and `b` the inner steps inside it.
    pub fn iters(&self) -> String {
        format!("{}({})", self.outer_cycles, self.inner_in_last_cycle)
    }

    /// Like [`iters`](Self::iters) but `--` for a failed solve.
    pub fn iters_or_dashes(&self) -> String {
        if self.converged {
            self.iters()
        } else {
            "--".into()
        }
    }
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}
