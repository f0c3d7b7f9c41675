//! Dense kernels checked against independent oracles: residuals, trace
//! identities, polynomial roots and constructed ranks.

use mgss_core::dense::{
    eig_general, eig_symmetric, lu_factor, rank, singular_values, DenseMatrix,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_matrix(rng: &mut StdRng, r: usize, c: usize) -> DenseMatrix {
    DenseMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn lu_solve_backward_error_on_random_systems() {
    let mut rng = StdRng::seed_from_u64(11);
    for trial in 0..100 {
        let n = if trial == 0 { 20 } else { rng.gen_range(1..25) };
        let mut m = random_matrix(&mut rng, n, n);
        for i in 0..n {
            m[(i, i)] += 2.0;
        }
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = lu_factor(&m).unwrap().solve(&rhs).unwrap();
        let mx = m.matvec(&x).unwrap();
        let r: Vec<f64> = mx.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        let bound = 1e-10 * (m.frobenius_norm() * norm(&x) + norm(&rhs));
        assert!(norm(&r) <= bound, "trial {trial}: {} > {bound}", norm(&r));
    }
}

#[test]
fn lu_reconstructs_permuted_matrix() {
    let mut rng = StdRng::seed_from_u64(5);
    let m = random_matrix(&mut rng, 12, 12);
    let f = lu_factor(&m).unwrap();
    let c = f.combined();
    let n = 12;
    let l = DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => c[(i, j)],
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => 0.0,
    });
    let u = DenseMatrix::from_fn(n, n, |i, j| if i <= j { c[(i, j)] } else { 0.0 });
    let pm = DenseMatrix::from_fn(n, n, |i, j| m[(f.permutation()[i], j)]);
    let diff = l.matmul(&u).unwrap().add_scaled(1.0, &pm, -1.0).unwrap();
    assert!(diff.frobenius_norm() <= 1e-12 * m.frobenius_norm());
}

#[test]
fn symmetric_eigenvalues_sum_to_trace() {
    let mut rng = StdRng::seed_from_u64(3);
    let r = random_matrix(&mut rng, 15, 15);
    let m = r.add_scaled(1.0, &r.transpose(), 1.0).unwrap();
    let e = eig_symmetric(&m).unwrap();
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
    let sum: f64 = e.iter().sum();
    let scale = e.iter().map(|x| x.abs()).sum::<f64>();
    assert!((sum - m.trace()).abs() <= 1e-10 * scale);
    // Sum of squares equals the squared Frobenius norm as well.
    let sq: f64 = e.iter().map(|x| x * x).sum();
    assert!((sq - m.frobenius_norm().powi(2)).abs() <= 1e-10 * sq);
}

#[test]
fn companion_matrix_of_z_cubed_minus_one_gives_cube_roots_of_unity() {
    // Companion of z³ − 1: ones on the subdiagonal, coefficient column (1, 0, 0).
    let m = DenseMatrix::from_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
    let s = eig_general(&m).unwrap();
    let h = 3f64.sqrt() / 2.0;
    let expected = [(-0.5, -h), (-0.5, h), (1.0, 0.0)];
    for (got, want) in s.eigenvalues.iter().zip(expected) {
        assert!((got.0 - want.0).abs() < 1e-10 && (got.1 - want.1).abs() < 1e-10, "{got:?}");
    }
}

#[test]
fn companion_matrix_of_known_polynomial() {
    // (z − 1)(z − 2)(z − 3)(z² + 1) = z⁵ − 6z⁴ + 12z³ − 12z² + 11z − 6
    let coeffs = [-6.0, 11.0, -12.0, 12.0, -6.0]; // c0..c4 of monic poly
    let n = 5;
    let m = DenseMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let s = eig_general(&m).unwrap();
    let expected = [(0.0, -1.0), (0.0, 1.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)];
    for (got, want) in s.eigenvalues.iter().zip(expected) {
        assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9, "{got:?}");
    }
}

#[test]
fn general_eigenvalues_come_in_conjugate_pairs() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..50 {
        let n = rng.gen_range(2..30);
        let m = random_matrix(&mut rng, n, n);
        let s = eig_general(&m).unwrap();
        assert_eq!(s.len(), n);
        let mut ims: Vec<f64> = s.eigenvalues.iter().map(|e| e.1).collect();
        let mut neg: Vec<f64> = ims.iter().map(|x| -x).collect();
        ims.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        for (a, b) in ims.iter().zip(&neg) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn general_eigenvalues_sum_to_trace() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..10 {
        let m = random_matrix(&mut rng, 30, 30);
        let s = eig_general(&m).unwrap();
        let re: f64 = s.eigenvalues.iter().map(|e| e.0).sum();
        let im: f64 = s.eigenvalues.iter().map(|e| e.1).sum();
        let scale = s.eigenvalues.iter().map(|e| e.0.abs()).sum::<f64>().max(1.0);
        assert!((re - m.trace()).abs() <= 1e-8 * scale);
        assert!(im.abs() <= 1e-8 * scale);
    }
}

/// Realification `[[X, −Y], [Y, X]]` of `M − λI`; its singular values are
/// those of the complex matrix, each repeated twice.
fn realified_shift(m: &DenseMatrix, lambda: Complex64) -> DenseMatrix {
    let n = m.nrows();
    DenseMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, ii) = (i / n, i % n);
        let (bj, jj) = (j / n, j % n);
        let x = m[(ii, jj)] - if ii == jj { lambda.re } else { 0.0 };
        let y = if ii == jj { -lambda.im } else { 0.0 };
        match (bi, bj) {
            (0, 0) | (1, 1) => x,
            (0, 1) => -y,
            _ => y,
        }
    })
}

#[test]
fn computed_eigenvalues_make_shifted_matrix_singular() {
    let mut rng = StdRng::seed_from_u64(29);
    for n in [4, 9, 16] {
        let m = random_matrix(&mut rng, n, n);
        let s = eig_general(&m).unwrap();
        for lambda in s.iter().step_by(2) {
            let sv = singular_values(&realified_shift(&m, lambda));
            let smin = *sv.last().unwrap();
            assert!(smin <= 1e-8 * m.frobenius_norm(), "n={n} λ={lambda} σ_min={smin}");
        }
    }
}

#[test]
fn nonnormal_block_matrix_eigenvalues() {
    // Block upper-triangular with known diagonal blocks: a rotation-scaling
    // block (eigenvalues 2 ± 3i) and a triangular block (−1, 0.5).
    let m = DenseMatrix::from_rows(&[
        &[2.0, -3.0, 5.0, 1.0],
        &[3.0, 2.0, -2.0, 4.0],
        &[0.0, 0.0, -1.0, 7.0],
        &[0.0, 0.0, 0.0, 0.5],
    ]);
    let s = eig_general(&m).unwrap();
    let expected = [(-1.0, 0.0), (0.5, 0.0), (2.0, -3.0), (2.0, 3.0)];
    for (got, want) in s.eigenvalues.iter().zip(expected) {
        assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12, "{got:?}");
    }
}

#[test]
fn rank_of_constructed_low_rank_product() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..20 {
        let left = random_matrix(&mut rng, 10, 3);
        let right = random_matrix(&mut rng, 3, 6);
        let m = left.matmul(&right).unwrap();
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&m.transpose()), 3);
    }
}

#[test]
fn singular_values_of_transpose_agree() {
    let mut rng = StdRng::seed_from_u64(37);
    for _ in 0..20 {
        let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
        let m = random_matrix(&mut rng, r, c);
        let a = singular_values(&m);
        let b = singular_values(&m.transpose());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-10 * a[0]);
        }
    }
}

#[test]
fn singular_values_square_to_gram_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(41);
    let m = random_matrix(&mut rng, 9, 5);
    let sv = singular_values(&m);
    let gram = m.transpose().matmul(&m).unwrap();
    let mut ev = eig_symmetric(&gram).unwrap();
    ev.reverse();
    for (s, e) in sv.iter().zip(&ev) {
        assert!((s * s - e).abs() <= 1e-12 * ev[0]);
    }
}
