//! Dense kernels used for exact inner solves and desk-scale spectral checks.
//!
//! Nothing here is tuned for large problems; every routine is `O(n³)` and is
//! only invoked below [`crate::DENSE_CAP`].

mod complex;
mod general;
mod lu;
mod matrix;
mod svd;
mod symmetric;

pub use complex::{inverse_iteration, EigenVector};
pub use general::{eig_general, ComplexSpectrum};
pub use lu::{lu_factor, LuFactors};
pub use matrix::DenseMatrix;
pub use svd::{default_rank_tolerance, rank, rank_with_tol, singular_values};
pub use symmetric::{cholesky_succeeds, eig_symmetric, eig_symmetric_vectors, SymmetricEigen};
