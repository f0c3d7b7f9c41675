#![allow(dead_code)]

use mgss_core::dense::DenseMatrix;
use mgss_core::saddle::SaddlePointSystem;
use mgss_core::sparse::SparseMatrix;
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_dense(rng: &mut StdRng, r: usize, c: usize) -> DenseMatrix {
    DenseMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

/// Positive definite (nonsymmetric unless `symmetric`) `n × n` matrix.
pub fn random_pd(rng: &mut StdRng, n: usize, symmetric: bool) -> DenseMatrix {
    let g = random_dense(rng, n, n);
    let mut a = g.transpose().matmul(&g).unwrap().add_scaled(1.0, &DenseMatrix::identity(n), 1.0).unwrap();
    if !symmetric {
        let k = random_dense(rng, n, n);
        a = a.add_scaled(1.0, &k.add_scaled(1.0, &k.transpose(), -1.0).unwrap(), 0.5).unwrap();
    }
    a
}

/// `m × n` matrix of rank `r`.
pub fn random_rank(rng: &mut StdRng, m: usize, n: usize, r: usize) -> DenseMatrix {
    random_dense(rng, m, r).matmul(&random_dense(rng, r, n)).unwrap()
}

/// Consistent system with `rank(B) = r` and `u* = 1`.
pub fn random_system(rng: &mut StdRng, n: usize, m: usize, r: usize, symmetric: bool) -> SaddlePointSystem {
    let a = SparseMatrix::from_dense(&random_pd(rng, n, symmetric));
    let b = SparseMatrix::from_dense(&random_rank(rng, m, n, r));
    SaddlePointSystem::from_solution(a, b, &vec![1.0; n + m]).unwrap()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn rel_err(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    norm(&d) / norm(y)
}

pub fn random_vec(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
