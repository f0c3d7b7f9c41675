//! Spectral reports against independently assembled dense matrices.

mod common;

use common::*;
use mgss_core::dense::{eig_general, lu_factor};
use mgss_core::problems::{generate, GeneratorSpec};
use mgss_core::saddle::{build_omega, SaddlePointSystem, ShiftMode};
use mgss_core::sparse::SparseMatrix;
use mgss_core::spectra::{
    alpha_limit_study, cluster_witnesses, gamma_spectrum, precond_spectrum, strictly_decreasing, unit_eigenvectors,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    v
}

#[test]
fn nonsingular_instance_has_no_unit_eigenvalue() {
    let mut rng = StdRng::seed_from_u64(31);
    let sys = random_system(&mut rng, 6, 2, 2, false);
    assert!(!sys.is_singular());
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.3, 0.3).unwrap();
    let r = gamma_spectrum(&sys, &shift).unwrap();
    assert_eq!(r.unit_eigenvalue_count, 0);
    // Oracle: Γ = (Ω + 𝒜)⁻¹(Ω − 𝒜) assembled without the ½ factors.
    let omega = shift.omega().to_dense();
    let block = sys.block().to_dense();
    let gamma = lu_factor(&omega.add_scaled(1.0, &block, 1.0).unwrap())
        .unwrap()
        .solve_matrix(&omega.add_scaled(1.0, &block, -1.0).unwrap())
        .unwrap();
    let rho = eig_general(&gamma).unwrap().spectral_radius();
    assert!((r.theta - rho).abs() <= 1e-10);
    assert!(r.theta < 1.0 && r.semi_convergent);
}

#[test]
fn gamma_and_preconditioned_spectra_correspond() {
    let mut rng = StdRng::seed_from_u64(32);
    let sys = random_system(&mut rng, 8, 3, 2, false);
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.2, 0.1).unwrap();
    let g = sorted(gamma_spectrum(&sys, &shift).unwrap().eigenvalues.to_complex());
    let p = precond_spectrum(&sys, &shift).unwrap();
    let mapped = sorted(p.eigenvalues.iter().map(|mu| 1.0 - 2.0 * mu).collect());
    for (a, b) in g.iter().zip(&mapped) {
        assert!((a - b).norm() <= 1e-8, "{a} vs {b}");
    }
    assert!(p.circle_ok);
    assert!(p.nonreal_disc.is_none() && p.real_interval.is_none() && p.intersection_ok.is_none());
}

#[test]
fn unit_cluster_matches_nullity_on_generated_problems() {
    for spec in [GeneratorSpec::stokes(4), GeneratorSpec::oseen(5)] {
        let sys = generate(&spec).unwrap();
        let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 1e-2, 1e-3).unwrap();
        let r = gamma_spectrum(&sys, &shift).unwrap();
        assert_eq!(r.unit_eigenvalue_count, sys.m() - sys.rank_b());
        assert!(r.index_one && r.semi_convergent);
        assert!(r.min_dist_to_minus_one > 1e-8);
    }
}

#[test]
fn symmetric_regions_hold_on_random_symmetric_instances() {
    let mut rng = StdRng::seed_from_u64(33);
    for _ in 0..10 {
        let sys = random_system(&mut rng, 9, 4, 3, true);
        for (a, b) in [(0.1, 0.1), (1e-2, 1e-3)] {
            let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), a, b).unwrap();
            let p = precond_spectrum(&sys, &shift).unwrap();
            assert!(p.circle_ok);
            assert!(p.nonreal_disc.as_ref().unwrap().all_nonreal_inside);
            assert!(p.real_interval.as_ref().unwrap().all_real_nonzero_inside);
            assert_eq!(p.intersection_ok, Some(true));
        }
    }
}

#[test]
fn witnesses_reconstruct_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(34);
    let sys = random_system(&mut rng, 8, 3, 2, false);
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.1, 0.2).unwrap();
    let w = cluster_witnesses(&sys, &shift).unwrap();
    assert_eq!(w.len(), 3);
    for w in w {
        assert!(w.available);
        assert!(w.reconstruction_error <= 1e-7);
        assert!(w.r_alpha.0 >= -1e-8);
        assert!(w.q_alpha > 0.0);
    }
}

#[test]
fn decoupled_cluster_distance_vanishes_with_alpha() {
    let mut rng = StdRng::seed_from_u64(35);
    let a = SparseMatrix::from_dense(&random_pd(&mut rng, 6, false));
    let sys = SaddlePointSystem::new(a, SparseMatrix::zeros(2, 6), vec![0.0; 6], vec![0.0; 2]).unwrap();
    let pts = alpha_limit_study(&sys, &[1e-1, 1e-2, 1e-3, 1e-4], 1e-3).unwrap();
    assert!(strictly_decreasing(&pts));
    assert!(pts[3].d_n < 1e-3);
    assert_eq!(pts.iter().map(|p| p.alpha).collect::<Vec<_>>(), vec![1e-1, 1e-2, 1e-3, 1e-4]);
}

#[test]
fn null_eigenvectors_have_no_velocity_part() {
    let mut rng = StdRng::seed_from_u64(36);
    let sys = random_system(&mut rng, 10, 5, 2, false);
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.1, 0.1).unwrap();
    let r = unit_eigenvectors(&sys, &shift).unwrap();
    assert_eq!(r.checked, 3);
    assert!(r.max_velocity_fraction <= 1e-6);
}
