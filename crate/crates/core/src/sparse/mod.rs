//! Compressed sparse row storage and the handful of kernels the solvers need.

mod csr;
mod mtx;
mod triplet;

pub use csr::{assemble_block_saddle, SparseMatrix};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use triplet::TripletBuffer;
