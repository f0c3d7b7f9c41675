use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("matrix is singular to working precision at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e})")]
    Asymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue of symmetric part {lambda_min:.3e})")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("inner Schur-complement GMRES stalled: residual ratio {ratio:.3e} after {iterations} iterations")]
    SchurSolve { iterations: usize, ratio: f64 },

    #[error("stationary iteration diverged at step {iteration} (residual ratio {ratio:.3e})")]
    Divergence { iteration: usize, ratio: f64 },

    #[error("dense verification needs dimension {size}, above the cap of {cap}")]
    DimensionCap { size: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {msg}")]
    MatrixMarket {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, found: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            found,
        }
    }
}
