//! The saddle point system `𝒜u = b`, its shift operators `Ω = diag(H, Q)`
//! and validation of the standing assumptions (positive definite `A`,
//! rank-deficient `B`, consistent right-hand side).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dense::{self, cholesky_succeeds, eig_symmetric};
use crate::error::{Error, Result};
use crate::problems::SplitMix64;
use crate::sparse::{assemble_block_saddle, read_matrix_market, write_matrix_market, SparseMatrix};
use crate::DENSE_CAP;

/// Consistent saddle point system `[[A, Bᵀ], [−B, 0]] (x; y) = (f; g)`.
#[derive(Debug, Clone)]
pub struct SaddlePointSystem {
    a: SparseMatrix,
    b: SparseMatrix,
    bt: SparseMatrix,
    block: SparseMatrix,
    f: Vec<f64>,
    g: Vec<f64>,
    rank_b: usize,
    rank_verified: bool,
    provenance: String,
}

/// Where the rank of `B` comes from when the dense cap is exceeded.
#[derive(Debug, Clone, Copy)]
pub enum RankSource {
    Compute,
    /// Trusted value, used only when `n + m` exceeds [`DENSE_CAP`].
    Declared(usize),
}

impl SaddlePointSystem {
    /// Builds a system, computing `rank(B)` densely (always below the cap).
    pub fn new(a: SparseMatrix, b: SparseMatrix, f: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        Self::with_rank(a, b, f, g, RankSource::Compute)
    }

    pub fn with_rank(
        a: SparseMatrix,
        b: SparseMatrix,
        f: Vec<f64>,
        g: Vec<f64>,
        rank: RankSource,
    ) -> Result<Self> {
        let block = assemble_block_saddle(&a, &b)?;
        let (n, m) = (a.nrows(), b.nrows());
        if m > n {
            return Err(Error::InvalidParameter(format!(
                "B has more rows ({m}) than columns ({n})"
            )));
        }
        if f.len() != n {
            return Err(Error::dim("f", n, f.len()));
        }
        if g.len() != m {
            return Err(Error::dim("g", m, g.len()));
        }
        let (rank_b, rank_verified) = match rank {
            _ if n + m <= DENSE_CAP => (dense::rank(&b.to_dense()), true),
            RankSource::Declared(r) => (r, false),
            RankSource::Compute => {
                return Err(Error::DimensionCap {
                    size: n + m,
                    cap: DENSE_CAP,
                })
            }
        };
        let bt = b.transpose();
        Ok(Self {
            a,
            b,
            bt,
            block,
            f,
            g,
            rank_b,
            rank_verified,
            provenance: String::new(),
        })
    }

    /// Builds the consistent system with right-hand side `b = 𝒜 u*`.
    pub fn from_solution(a: SparseMatrix, b: SparseMatrix, u_star: &[f64]) -> Result<Self> {
        let (f, g) = build_rhs(&a, &b, u_star)?;
        Self::new(a, b, f, g)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    /// `Bᵀ`, materialized once.
    pub fn bt(&self) -> &SparseMatrix {
        &self.bt
    }

    /// The assembled block matrix `𝒜`.
    pub fn block(&self) -> &SparseMatrix {
        &self.block
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// `b = (f; g)`.
    pub fn rhs(&self) -> Vec<f64> {
        let mut r = self.f.clone();
        r.extend_from_slice(&self.g);
        r
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.nrows()
    }

    pub fn dim(&self) -> usize {
        self.n() + self.m()
    }

    pub fn rank_b(&self) -> usize {
        self.rank_b
    }

    pub fn rank_verified(&self) -> bool {
        self.rank_verified
    }

    pub fn nullity_b(&self) -> usize {
        self.m() - self.rank_b
    }

    pub fn is_singular(&self) -> bool {
        self.rank_b < self.m()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `‖b − 𝒜u‖₂`.
    pub fn residual_norm(&self, u: &[f64]) -> Result<f64> {
        let au = self.block.spmv(u)?;
        let b = self.rhs();
        Ok(au.iter().zip(&b).map(|(x, y)| (y - x).powi(2)).sum::<f64>().sqrt())
    }

    pub fn is_a_symmetric(&self) -> bool {
        self.a.asymmetry() <= 1e-12 * self.a.frobenius_norm()
    }

    /// Writes `A.mtx`, `B.mtx` and `system.json` into `dir`.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        write_matrix_market(&self.a, dir.join("A.mtx"))?;
        write_matrix_market(&self.b, dir.join("B.mtx"))?;
        let sidecar = Sidecar {
            n: self.n(),
            m: self.m(),
            rank_b: self.rank_b,
            f: self.f.clone(),
            g: self.g.clone(),
            provenance: self.provenance.clone(),
        };
        fs::write(dir.join("system.json"), serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }

    /// Reads a directory written by [`save_dir`](Self::save_dir). The rank is
    /// recomputed below the dense cap and trusted from the sidecar above it.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let a = read_matrix_market(dir.join("A.mtx"))?;
        let b = read_matrix_market(dir.join("B.mtx"))?;
        let sidecar: Sidecar = serde_json::from_str(&fs::read_to_string(dir.join("system.json"))?)?;
        if sidecar.n != a.nrows() {
            return Err(Error::dim("sidecar n", a.nrows(), sidecar.n));
        }
        if sidecar.m != b.nrows() {
            return Err(Error::dim("sidecar m", b.nrows(), sidecar.m));
        }
        Ok(
            Self::with_rank(a, b, sidecar.f, sidecar.g, RankSource::Declared(sidecar.rank_b))?
                .with_provenance(sidecar.provenance),
        )
    }
}

/// JSON sidecar of the on-disk system format.
#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    m: usize,
    #[serde(rename = "rank_B")]
    rank_b: usize,
    f: Vec<f64>,
    g: Vec<f64>,
    provenance: String,
}

/// `(f; g) = 𝒜 u*`, computed with the assembled block matrix so that the
/// system is consistent exactly in floating point.
pub fn build_rhs(a: &SparseMatrix, b: &SparseMatrix, u_star: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let block = assemble_block_saddle(a, b)?;
    if u_star.len() != block.ncols() {
        return Err(Error::dim("u*", block.ncols(), u_star.len()));
    }
    let mut f = block.spmv(u_star)?;
    let g = f.split_off(a.nrows());
    Ok((f, g))
}

/// Which member of the shift-splitting family produced `Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftMode {
    /// `H = αI`, `Q = αI`.
    Ss,
    /// `H = αI`, `Q = βI`.
    Gss,
    /// `H = α(A + Aᵀ)`, `Q = αI + βBBᵀ`.
    Mgss,
    /// User-supplied SPD blocks.
    Custom,
}

impl std::fmt::Display for ShiftMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShiftMode::Ss => "ss",
            ShiftMode::Gss => "gss",
            ShiftMode::Mgss => "mgss",
            ShiftMode::Custom => "custom",
        })
    }
}

/// The block diagonal shift `Ω = diag(H, Q)`.
#[derive(Debug, Clone)]
pub struct ShiftOperators {
    pub h: SparseMatrix,
    pub q: SparseMatrix,
    pub mode: ShiftMode,
    pub alpha: f64,
    pub beta: f64,
}

impl ShiftOperators {
    /// `Ω` as one sparse matrix.
    pub fn omega(&self) -> SparseMatrix {
        self.h.block_diag(&self.q)
    }

    /// Wraps user-supplied `H`, `Q`; both must be symmetric positive definite.
    pub fn custom(h: SparseMatrix, q: SparseMatrix) -> Result<Self> {
        let shift = Self {
            h,
            q,
            mode: ShiftMode::Custom,
            alpha: f64::NAN,
            beta: f64::NAN,
        };
        shift.verify_spd()?;
        Ok(shift)
    }

    fn verify_spd(&self) -> Result<()> {
        for block in [&self.h, &self.q] {
            if !block.is_square() {
                return Err(Error::dim("shift block must be square", block.nrows(), block.ncols()));
            }
            if block.nrows() > DENSE_CAP {
                continue;
            }
            let d = block.to_dense();
            if !cholesky_succeeds(&d) {
                let lambda_min = eig_symmetric(&d)
                    .map(|e| e.first().copied().unwrap_or(f64::NAN))
                    .unwrap_or(f64::NAN);
                return Err(Error::NotPositiveDefinite { lambda_min });
            }
        }
        Ok(())
    }
}

/// Assembles `H` and `Q` for the requested mode. `beta` is ignored for
/// [`ShiftMode::Ss`]; [`ShiftMode::Custom`] has to go through
/// [`ShiftOperators::custom`].
pub fn build_omega(
    mode: ShiftMode,
    a: &SparseMatrix,
    b: &SparseMatrix,
    alpha: f64,
    beta: f64,
) -> Result<ShiftOperators> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if mode != ShiftMode::Ss && !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let (n, m) = (a.nrows(), b.nrows());
    let (h, q) = match mode {
        ShiftMode::Ss => (
            SparseMatrix::scaled_identity(n, alpha),
            SparseMatrix::scaled_identity(m, alpha),
        ),
        ShiftMode::Gss => (
            SparseMatrix::scaled_identity(n, alpha),
            SparseMatrix::scaled_identity(m, beta),
        ),
        ShiftMode::Mgss => {
            let h = a.add_scaled(alpha, &a.transpose(), alpha)?;
            let bbt = b.matmul(&b.transpose())?;
            let q = SparseMatrix::scaled_identity(m, alpha).add_scaled(1.0, &bbt, beta)?;
            (h, q)
        }
        ShiftMode::Custom => {
            return Err(Error::InvalidParameter(
                "custom shifts are built with ShiftOperators::custom".into(),
            ))
        }
    };
    let shift = ShiftOperators {
        h,
        q,
        mode,
        alpha,
        beta: if mode == ShiftMode::Ss { alpha } else { beta },
    };
    if mode == ShiftMode::Mgss {
        shift.verify_spd()?;
    }
    Ok(shift)
}

/// How a property was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Dense computation below the cap.
    Verified,
    /// Random probes above the cap; not a proof.
    Unverified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub m: usize,
    /// `λ_min((A + Aᵀ)/2)`, or the smallest probe Rayleigh quotient above the cap.
    pub lambda_min_sym_a: f64,
    pub positive_definite: bool,
    pub certification: Certification,
    pub a_symmetric: bool,
    pub rank_b: usize,
    pub nullity_b: usize,
    pub singular: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks positive definiteness of `A` and reports the rank structure of `B`.
/// Failures are collected in the report rather than returned as errors.
pub fn validate(sys: &SaddlePointSystem) -> ValidationReport {
    let (n, m) = (sys.n(), sys.m());
    let mut failures = Vec::new();
    let (lambda_min, certification) = if n + m <= DENSE_CAP {
        let sym = sys.a().to_dense().symmetric_part();
        match eig_symmetric(&sym) {
            Ok(e) => (e.first().copied().unwrap_or(f64::INFINITY), Certification::Verified),
            Err(e) => {
                failures.push(format!("eigenvalues of symmetric part: {e}"));
                (f64::NAN, Certification::Verified)
            }
        }
    } else {
        (probe_min_rayleigh(sys.a(), 64, 0x5eed), Certification::Unverified)
    };
    let positive_definite = lambda_min > 0.0;
    if !positive_definite {
        failures.push(format!(
            "A is not positive definite: lambda_min of symmetric part is {lambda_min:.3e}"
        ));
    }
    if !sys.rank_verified() {
        failures.push("rank(B) was declared, not computed".into());
    }
    ValidationReport {
        n,
        m,
        lambda_min_sym_a: lambda_min,
        positive_definite,
        certification,
        a_symmetric: sys.is_a_symmetric(),
        rank_b: sys.rank_b(),
        nullity_b: sys.nullity_b(),
        singular: sys.is_singular(),
        failures,
    }
}

/// Smallest `xᵀAx / xᵀx` over random probes.
fn probe_min_rayleigh(a: &SparseMatrix, probes: usize, seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let n = a.ncols();
    (0..probes)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let ax = a.spmv(&x).expect("square matrix");
            crate::dot(&x, &ax) / crate::dot(&x, &x)
        })
        .fold(f64::INFINITY, f64::min)
}
