//! GMRES and the stationary iteration against true-residual and dense oracles.

mod common;

use common::*;
use mgss_core::dense::{lu_factor, DenseMatrix};
use mgss_core::krylov::{gmres_restarted, stationary_mgss, GmresConfig};
use mgss_core::precond::{InnerStrategy, MgssPreconditioner};
use mgss_core::problems::{generate, GeneratorSpec};
use mgss_core::saddle::{build_omega, ShiftMode};
use mgss_core::spectra::gamma_spectrum;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn audited(restart: usize, tol: f64) -> GmresConfig {
    GmresConfig {
        restart,
        rel_tol: tol,
        max_iters: 1000,
        audit: true,
    }
}

#[test]
fn random_spd_true_residual() {
    let mut rng = StdRng::seed_from_u64(21);
    let a = random_pd(&mut rng, 30, true);
    let b = random_vec(&mut rng, 30);
    let (x, rep) = gmres_restarted(&a, None, &b, None, &audited(5, 1e-10)).unwrap();
    assert!(rep.converged);
    let ax = a.matvec(&x).unwrap();
    assert!(rel_err(&ax, &b) <= 1e-8);
}

#[test]
fn report_invariants_hold() {
    let mut rng = StdRng::seed_from_u64(22);
    for trial in 0..20 {
        let sys = random_system(&mut rng, 10 + trial % 7, 4, 2 + trial % 2, trial % 2 == 0);
        let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.05, 0.05).unwrap();
        let pc = MgssPreconditioner::factor(&sys, shift, InnerStrategy::Direct).unwrap();
        for p in [Some(&pc as &dyn mgss_core::krylov::LinearOperator), None] {
            let (_, rep) = gmres_restarted(sys.block(), p, &sys.rhs(), None, &audited(5, 1e-7)).unwrap();
            let h = &rep.residual_history;
            assert_eq!(rep.r_k, h[h.len() - 1] / h[0]);
            assert_eq!(h.len(), rep.total_inner + 1);
            if rep.converged {
                assert!(rep.r_k <= 1e-7);
                assert!((1..=5).contains(&rep.inner_in_last_cycle));
            }
            assert!(rep.max_consistency_gap.unwrap() <= 1e-8);
        }
    }
}

#[test]
fn residual_nonincreasing_within_each_cycle() {
    let sys = generate(&GeneratorSpec::oseen(6)).unwrap();
    let cfg = GmresConfig {
        max_iters: 200,
        ..GmresConfig::default()
    };
    let (_, rep) = gmres_restarted(sys.block(), None, &sys.rhs(), None, &cfg).unwrap();
    // Entries 1..=5 belong to cycle 1, 6..=10 to cycle 2, ...; the last entry
    // of each cycle is the recomputed residual, which starts the next one.
    for cycle in rep.residual_history[1..].chunks(5) {
        for w in cycle.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "{w:?}");
        }
    }
}

#[test]
fn left_preconditioning_matches_explicit_dense_system() {
    let mut rng = StdRng::seed_from_u64(23);
    let sys = random_system(&mut rng, 20, 6, 4, false);
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 0.05, 0.05).unwrap();
    let pc = MgssPreconditioner::factor(&sys, shift, InnerStrategy::Direct).unwrap();
    let m_lu = lu_factor(&pc.assemble_dense_verification(&sys).unwrap().m).unwrap();
    let explicit: DenseMatrix = m_lu.solve_matrix(&sys.block().to_dense()).unwrap();
    let pb = m_lu.solve(&sys.rhs()).unwrap();
    let cfg = GmresConfig {
        rel_tol: 1e-10,
        ..GmresConfig::default()
    };
    let (_, implicit) = gmres_restarted(sys.block(), Some(&pc), &sys.rhs(), None, &cfg).unwrap();
    let (_, dense) = gmres_restarted(&explicit, None, &pb, None, &cfg).unwrap();
    assert_eq!(implicit.total_inner, dense.total_inner);
    // Relative agreement, with an absolute floor at rounding level for the
    // entries that sink below 1e-10 of the initial residual.
    for (a, b) in implicit.residual_history.iter().zip(&dense.residual_history) {
        assert!((a - b).abs() <= 1e-6 * b + 1e-12 * dense.residual_history[0], "{a} vs {b}");
    }
}

#[test]
fn stokes_preconditioned_run_reports_iters() {
    let sys = generate(&GeneratorSpec::stokes(8)).unwrap();
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 1e-3, 1e-3).unwrap();
    let pc = MgssPreconditioner::factor(&sys, shift, InnerStrategy::Direct).unwrap();
    let (_, with) = gmres_restarted(sys.block(), Some(&pc), &sys.rhs(), None, &GmresConfig::default()).unwrap();
    let (_, without) = gmres_restarted(sys.block(), None, &sys.rhs(), None, &GmresConfig::default()).unwrap();
    assert!(with.converged && with.outer_cycles >= 1);
    assert!((1..=5).contains(&with.inner_in_last_cycle));
    assert!(without.total_inner > with.total_inner);
}

#[test]
fn stationary_contraction_approaches_pseudo_spectral_radius() {
    let sys = generate(&GeneratorSpec::stokes(6)).unwrap();
    let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), 1.0, 1.0).unwrap();
    let theta = gamma_spectrum(&sys, &shift).unwrap().theta;
    let pc = MgssPreconditioner::factor(&sys, shift, InnerStrategy::Direct).unwrap();
    let (u, rep) = stationary_mgss(&sys, &pc, None, 5000, 1e-10).unwrap();
    assert!(rep.converged);
    assert!(sys.residual_norm(&u).unwrap() <= 1e-10 * rep.residual_history[0]);
    let h = &rep.residual_history;
    assert!(h.len() > 70);
    let c = (h[70] / h[50]).powf(1.0 / 20.0);
    assert!((c / theta).ln().abs() <= 2f64.ln(), "{c} vs {theta}");
}
