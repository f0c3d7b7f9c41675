//! Modified generalized shift-splitting (MGSS) preconditioning for singular
//! saddle point systems
//!
//! ```text
//!   [ A   Bᵀ ] [x]   [f]
//!   [ -B  0  ] [y] = [g]
//! ```
//!
//! with `A` positive definite (possibly nonsymmetric) and `B` rank deficient.
//! The crate contains everything needed to build, precondition, solve and
//! spectrally audit such systems at desk scale:
//!
//! * [`sparse`]: CSR storage, kernels and Matrix Market I/O.
//! * [`dense`]: LU, symmetric Jacobi, Francis QR and SVD for verification.
//! * [`saddle`]: the system type, shift operators `Ω = diag(H, Q)` and validation.
//! * [`precond`]: the block-factored preconditioner `M = ½(Ω + 𝒜)`.
//! * [`krylov`]: restarted left-preconditioned GMRES and the stationary iteration.
//! * [`spectra`]: executable semi-convergence conditions and eigenvalue bounds.
//! * [`problems`]: MAC Stokes/Oseen and synthetic singular test problems.

pub mod dense;
pub mod error;
pub mod krylov;
pub mod precond;
pub mod problems;
pub mod saddle;
pub mod sparse;
pub mod spectra;

pub use error::{Error, Result};

/// Largest `n + m` for which dense verification (eigenvalues, ranks,
/// positive-definiteness certificates) is attempted.
pub const DENSE_CAP: usize = 2000;

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
