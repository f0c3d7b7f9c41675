//! Executable forms of the semi-convergence conditions for `Γ = M⁻¹N` and of
//! the eigenvalue inclusion regions for `K⁻¹𝒜` with `K = Ω + 𝒜`.
//!
//! Everything here is dense and limited to `n + m ≤` [`DENSE_CAP`].

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{
    eig_general, eig_symmetric, inverse_iteration, lu_factor, singular_values, ComplexSpectrum,
    DenseMatrix,
};
use crate::error::{Error, Result};
use crate::precond::{DenseVerificationSet, InnerStrategy, MgssPreconditioner};
use crate::saddle::{build_omega, SaddlePointSystem, ShiftMode, ShiftOperators};
use crate::DENSE_CAP;

/// Slack for the inclusion regions.
pub const CHECK_TOL: f64 = 1e-8;
/// Relative singular-value cut used for `rank(I − Γ)` and `rank((I − Γ)²)`.
pub const RANK_TOL: f64 = 1e-8;
/// Eigenvalues with `|μ|` below this are the structural zeros of `K⁻¹𝒜`.
pub const ZERO_TOL: f64 = 1e-10;
/// Eigenvalues with `|Im μ|` above this count as nonreal.
pub const IMAG_TOL: f64 = 1e-10;

fn check_cap(sys: &SaddlePointSystem) -> Result<()> {
    if sys.dim() > DENSE_CAP {
        return Err(Error::DimensionCap {
            size: sys.dim(),
            cap: DENSE_CAP,
        });
    }
    Ok(())
}

fn dense_set(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<DenseVerificationSet> {
    check_cap(sys)?;
    MgssPreconditioner::factor(sys, shift.clone(), InnerStrategy::Direct)?.assemble_dense_verification(sys)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaSpectrumReport {
    pub eigenvalues: ComplexSpectrum,
    /// Pseudo-spectral radius: largest `|λ|` outside the unit cluster.
    pub theta: f64,
    pub unit_eigenvalue_count: usize,
    /// `m − rank(B)`, the dimension of `null(𝒜)`.
    pub expected_unit_count: usize,
    /// `1e-8·(1 + ‖Γ‖_F)`.
    pub cluster_tol: f64,
    pub min_dist_to_minus_one: f64,
    pub rank_i_minus_gamma: usize,
    pub rank_i_minus_gamma_squared: usize,
    pub index_one: bool,
    pub semi_convergent: bool,
    /// Filled when `theta ≥ 1 − 1e-6`: whether the unit cluster still has
    /// `m − r` members, which separates a near-unit eigenvalue absorbed into
    /// `theta` from a genuine failure.
    pub fallback_unit_count_ok: Option<bool>,
}

/// Spectrum of `Γ = I − M⁻¹𝒜` and the conditions `λ ≠ −1`, `ϑ(Γ) < 1` and
/// `index(I − Γ) = 1`.
pub fn gamma_spectrum(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<GammaSpectrumReport> {
    let set = dense_set(sys, shift)?;
    gamma_report(sys, &set.gamma)
}

fn gamma_report(sys: &SaddlePointSystem, gamma: &DenseMatrix) -> Result<GammaSpectrumReport> {
    let eigenvalues = eig_general(gamma)?;
    let cluster_tol = 1e-8 * (1.0 + gamma.frobenius_norm());
    let one = Complex64::new(1.0, 0.0);
    let mut unit = 0;
    let mut theta: f64 = 0.0;
    let mut min_dist = f64::INFINITY;
    for l in eigenvalues.iter() {
        if (l - one).norm() <= cluster_tol {
            unit += 1;
        } else {
            theta = theta.max(l.norm());
        }
        min_dist = min_dist.min((l + one).norm());
    }
    let dim = gamma.nrows();
    let i_minus = DenseMatrix::identity(dim).add_scaled(1.0, gamma, -1.0)?;
    let r1 = relative_rank(&i_minus);
    let r2 = relative_rank(&i_minus.matmul(&i_minus)?);
    let index_one = r1 == r2;
    let expected = sys.nullity_b();
    Ok(GammaSpectrumReport {
        eigenvalues,
        theta,
        unit_eigenvalue_count: unit,
        expected_unit_count: expected,
        cluster_tol,
        min_dist_to_minus_one: min_dist,
        rank_i_minus_gamma: r1,
        rank_i_minus_gamma_squared: r2,
        index_one,
        semi_convergent: index_one && theta < 1.0,
        fallback_unit_count_ok: (theta >= 1.0 - 1e-6).then_some(unit == expected),
    })
}

/// Rank counting singular values above `1e-8·σ_max`. The null directions of
/// a computed `I − Γ` carry rounding of order `ε·κ(M)`, which for small
/// shifts sits well above the `max(r, c)·ε·σ_max` default.
fn relative_rank(m: &DenseMatrix) -> usize {
    let sv = singular_values(m);
    let tol = RANK_TOL * sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Extremal spectral data entering the real-eigenvalue interval.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub lambda_min_a: f64,
    pub lambda_max_a: f64,
    pub lambda_min_h: f64,
    pub lambda_max_h: f64,
    pub lambda_min_q: f64,
    pub lambda_max_q: f64,
    /// Smallest nonzero singular value of `B`.
    pub sigma_min_b: f64,
    pub sigma_max_b: f64,
    pub kappa_h: f64,
}

impl SpectralBounds {
    pub fn compute(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<Self> {
        check_cap(sys)?;
        let extremes = |m: &DenseMatrix| -> Result<(f64, f64)> {
            let e = eig_symmetric(&m.symmetric_part())?;
            Ok((e[0], e[e.len() - 1]))
        };
        let (lambda_min_a, lambda_max_a) = extremes(&sys.a().to_dense())?;
        let (lambda_min_h, lambda_max_h) = extremes(&shift.h.to_dense())?;
        let (lambda_min_q, lambda_max_q) = extremes(&shift.q.to_dense())?;
        let sv = singular_values(&sys.b().to_dense());
        let nonzero = &sv[..sys.rank_b().min(sv.len())];
        Ok(Self {
            lambda_min_a,
            lambda_max_a,
            lambda_min_h,
            lambda_max_h,
            lambda_min_q,
            lambda_max_q,
            sigma_min_b: nonzero.last().copied().unwrap_or(0.0),
            sigma_max_b: nonzero.first().copied().unwrap_or(0.0),
            kappa_h: lambda_max_h / lambda_min_h,
        })
    }

    /// Radius of the disc about `1` holding the nonreal eigenvalues:
    /// `√(λ_max(H) / (λ_max(H) + λ_min(A)))`.
    pub fn nonreal_radius(&self) -> f64 {
        (self.lambda_max_h / (self.lambda_max_h + self.lambda_min_a)).sqrt()
    }

    /// Interval holding the nonzero real eigenvalues.
    pub fn real_interval(&self) -> (f64, f64) {
        let s_min2 = self.sigma_min_b * self.sigma_min_b;
        let s_max2 = self.sigma_max_b * self.sigma_max_b;
        let first = self.lambda_min_a / (self.lambda_max_h + self.lambda_min_a);
        let second =
            s_min2 / (self.lambda_max_q * (self.lambda_max_h + self.kappa_h * self.lambda_max_a) + s_min2);
        let upper = (self.lambda_min_q * self.lambda_max_a + s_max2)
            / (self.lambda_min_q * (self.lambda_min_h + self.lambda_max_a) + s_max2);
        (first.min(second), upper)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonrealDiscCheck {
    pub radius: f64,
    pub all_nonreal_inside: bool,
    /// Largest `|μ − 1|` over the nonreal, nonzero eigenvalues.
    pub max_dist_from_one: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealIntervalCheck {
    pub lower: f64,
    pub upper: f64,
    pub all_real_nonzero_inside: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrecondSpectrumReport {
    /// Eigenvalues of `(Ω + 𝒜)⁻¹𝒜`.
    pub eigenvalues: ComplexSpectrum,
    /// Whether every eigenvalue lies in the disc `|μ − ½| ≤ ½`.
    pub circle_ok: bool,
    pub max_dist_from_half: f64,
    /// Present only for symmetric `A`.
    pub bounds: Option<SpectralBounds>,
    pub nonreal_disc: Option<NonrealDiscCheck>,
    pub real_interval: Option<RealIntervalCheck>,
    /// Nonreal eigenvalues inside both discs.
    pub intersection_ok: Option<bool>,
}

/// Spectrum of `K⁻¹𝒜` with `K = Ω + 𝒜` and its inclusion regions. The
/// symmetric-`A` regions are skipped when `‖A − Aᵀ‖_F > 1e-12‖A‖_F`.
pub fn precond_spectrum(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<PrecondSpectrumReport> {
    check_cap(sys)?;
    let block = sys.block().to_dense();
    let k = shift.omega().to_dense().add_scaled(1.0, &block, 1.0)?;
    let eigenvalues = eig_general(&lu_factor(&k)?.solve_matrix(&block)?)?;
    let half = Complex64::new(0.5, 0.0);
    let max_dist_from_half = eigenvalues.iter().map(|mu| (mu - half).norm()).fold(0.0, f64::max);
    let circle_ok = max_dist_from_half <= 0.5 + CHECK_TOL;

    let mut report = PrecondSpectrumReport {
        eigenvalues,
        circle_ok,
        max_dist_from_half,
        bounds: None,
        nonreal_disc: None,
        real_interval: None,
        intersection_ok: None,
    };
    if !sys.is_a_symmetric() {
        return Ok(report);
    }
    let bounds = SpectralBounds::compute(sys, shift)?;
    let radius = bounds.nonreal_radius();
    let (lower, upper) = bounds.real_interval();
    let mut max_dist_from_one: f64 = 0.0;
    let mut reals_inside = true;
    for mu in report.eigenvalues.iter() {
        if mu.norm() <= ZERO_TOL {
            continue;
        }
        if mu.im.abs() > IMAG_TOL {
            max_dist_from_one = max_dist_from_one.max((mu - 1.0).norm());
        } else if mu.re < lower - CHECK_TOL || mu.re > upper + CHECK_TOL {
            reals_inside = false;
        }
    }
    let disc = NonrealDiscCheck {
        radius,
        all_nonreal_inside: max_dist_from_one <= radius + CHECK_TOL,
        max_dist_from_one,
    };
    report.intersection_ok = Some(circle_ok && disc.all_nonreal_inside);
    report.nonreal_disc = Some(disc);
    report.real_interval = Some(RealIntervalCheck {
        lower,
        upper,
        all_real_nonzero_inside: reals_inside,
    });
    report.bounds = Some(bounds);
    Ok(report)
}

/// One eigenvalue `γ` of `S⁻¹B(H+A)⁻¹Bᵀ` written as `r/(q + r)` with
/// `r = u*B(H+A)⁻¹Bᵀu`, `q = u*Qu` for its unit eigenvector `u`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterWitness {
    /// `(re, im)` of `γ`.
    pub gamma: (f64, f64),
    pub r_alpha: (f64, f64),
    pub q_alpha: f64,
    /// `|γ − r/(q + r)|`; NaN when no eigenvector could be recovered.
    pub reconstruction_error: f64,
    pub available: bool,
}

/// `u*Mu` for complex `u` and real `M`.
fn quadratic_form(m: &DenseMatrix, u: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ui) in u.iter().enumerate() {
        let row: Complex64 = m.row(i).iter().zip(u).map(|(&mij, uj)| mij * uj).sum();
        acc += ui.conj() * row;
    }
    acc
}

/// Witnesses for every eigenvalue of the `(2,2)` block `S⁻¹B(H+A)⁻¹Bᵀ`.
pub fn cluster_witnesses(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<Vec<ClusterWitness>> {
    check_cap(sys)?;
    let pc = MgssPreconditioner::factor(sys, shift.clone(), InnerStrategy::Direct)?;
    let set = pc.assemble_dense_verification(sys)?;
    let s = pc.schur_dense().expect("direct strategy");
    let q = shift.q.to_dense();
    // B(H+A)⁻¹Bᵀ = S − Q
    let g = s.add_scaled(1.0, &q, -1.0)?;
    let spectrum = eig_general(&set.k)?;
    Ok(spectrum
        .iter()
        .map(|gamma| match inverse_iteration(&set.k, gamma, 1e-10) {
            Some(ev) => {
                let r = quadratic_form(&g, &ev.vector);
                let qa = quadratic_form(&q, &ev.vector).re;
                let err = (gamma - r / (qa + r)).norm();
                ClusterWitness {
                    gamma: (gamma.re, gamma.im),
                    r_alpha: (r.re, r.im),
                    q_alpha: qa,
                    reconstruction_error: err,
                    available: true,
                }
            }
            None => ClusterWitness {
                gamma: (gamma.re, gamma.im),
                r_alpha: (f64::NAN, f64::NAN),
                q_alpha: f64::NAN,
                reconstruction_error: f64::NAN,
                available: false,
            },
        })
        .collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterPoint {
    pub alpha: f64,
    pub beta: f64,
    /// The `n`-th smallest `|μ − 1|` over the spectrum of `K⁻¹𝒜`.
    pub d_n: f64,
}

/// `d_n(α)` for MGSS shifts over a list of `α` (fixed `β`), computed in
/// parallel and returned in input order.
pub fn alpha_limit_study(sys: &SaddlePointSystem, alphas: &[f64], beta: f64) -> Result<Vec<ClusterPoint>> {
    check_cap(sys)?;
    alphas
        .par_iter()
        .map(|&alpha| {
            let shift = build_omega(ShiftMode::Mgss, sys.a(), sys.b(), alpha, beta)?;
            let rep = precond_spectrum(sys, &shift)?;
            let mut dist: Vec<f64> = rep.eigenvalues.iter().map(|mu| (mu - 1.0).norm()).collect();
            dist.sort_by(f64::total_cmp);
            Ok(ClusterPoint {
                alpha,
                beta,
                d_n: dist[sys.n() - 1],
            })
        })
        .collect()
}

/// Whether a sequence of cluster points is strictly decreasing in `d_n`.
pub fn strictly_decreasing(points: &[ClusterPoint]) -> bool {
    points.windows(2).all(|w| w[1].d_n < w[0].d_n)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullEigenvectorReport {
    /// Eigenvalues of `Γ` within `1e-8` of `1` that were examined.
    pub checked: usize,
    /// Largest `‖x‖ / ‖(x; y)‖` over their eigenvectors.
    pub max_velocity_fraction: f64,
}

/// For eigenvalue `1` of `Γ`, the eigenvectors `(x; y)` should have `x = 0`.
pub fn unit_eigenvectors(sys: &SaddlePointSystem, shift: &ShiftOperators) -> Result<NullEigenvectorReport> {
    let set = dense_set(sys, shift)?;
    let spectrum = eig_general(&set.gamma)?;
    let n = sys.n();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for l in spectrum.iter().filter(|l| (l - 1.0).norm() <= 1e-8) {
        checked += 1;
        match inverse_iteration(&set.gamma, l, 1e-10) {
            Some(ev) => {
                let total: f64 = ev.vector.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let x: f64 = ev.vector[..n].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(x / total);
            }
            None => worst = f64::INFINITY,
        }
    }
    Ok(NullEigenvectorReport {
        checked,
        max_velocity_fraction: worst,
    })
}
