//! Reproducible singular saddle point test problems.
//!
//! MAC kinds discretize the unit square with `G` cells per side (`h = 1/G`):
//! pressures live at cell centres, `u` on the interior vertical faces and
//! `v` on the interior horizontal faces, giving
//!
//! ```text
//!   n(G) = 2G(G − 1)      velocity unknowns
//!   m(G) = G²             pressure unknowns, rank(B) = G² − 1
//! ```
//!
//! Every kind uses the right-hand side `(f; g) = 𝒜·1`.

mod mac;
mod rng;
mod synthetic;

pub use rng::SplitMix64;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saddle::SaddlePointSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// `−νΔu + ∇p = f`, `∇·u = g`; symmetric `A`.
    StokesMac,
    /// Stokes plus skew-symmetrized centered convection by a recirculating wind.
    OseenMac,
    /// Random sparse blocks with prescribed rank deficiency.
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub n: usize,
    pub m: usize,
    /// `m − rank(B)`.
    pub deficiency: usize,
    /// Fill probability of optional entries, in `(0, 1]`.
    pub density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: ProblemKind,
    /// Cells per side (MAC kinds).
    pub grid: usize,
    /// Viscosity (MAC kinds).
    pub nu: f64,
    /// Synthetic kind only.
    pub synthetic: Option<SyntheticParams>,
    /// Synthetic kind: omit the skew-symmetric part of `A`.
    pub symmetric_a: bool,
}

impl GeneratorSpec {
    /// Stokes with `ν = 1`.
    pub fn stokes(grid: usize) -> Self {
        Self {
            kind: ProblemKind::StokesMac,
            grid,
            nu: 1.0,
            synthetic: None,
            symmetric_a: true,
        }
    }

    /// Oseen with `ν = 0.01`.
    pub fn oseen(grid: usize) -> Self {
        Self {
            kind: ProblemKind::OseenMac,
            grid,
            nu: 0.01,
            synthetic: None,
            symmetric_a: false,
        }
    }

    pub fn synthetic(params: SyntheticParams, symmetric_a: bool) -> Self {
        Self {
            kind: ProblemKind::Synthetic,
            grid: 0,
            nu: 1.0,
            synthetic: Some(params),
            symmetric_a,
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self.kind {
            ProblemKind::StokesMac | ProblemKind::OseenMac => {
                if self.grid < 3 {
                    return bad(format!("grid must be at least 3, got {}", self.grid));
                }
                if !(self.nu > 0.0 && self.nu.is_finite()) {
                    return bad(format!("viscosity must be positive, got {}", self.nu));
                }
            }
            ProblemKind::Synthetic => {
                let Some(p) = self.synthetic else {
                    return bad("synthetic kind needs synthetic parameters".into());
                };
                if p.deficiency < 1 || p.deficiency >= p.m {
                    return bad(format!("deficiency must lie in [1, m), got {} with m = {}", p.deficiency, p.m));
                }
                if p.m > p.n {
                    return bad(format!("m = {} exceeds n = {}", p.m, p.n));
                }
                if !(p.density > 0.0 && p.density <= 1.0) {
                    return bad(format!("density must lie in (0, 1], got {}", p.density));
                }
            }
        }
        Ok(())
    }

    /// Short identifier used in tables, e.g. `stokes-g8` or `synthetic-n40-m12-d3-s7`.
    pub fn label(&self) -> String {
        match (self.kind, self.synthetic) {
            (ProblemKind::StokesMac, _) => format!("stokes-g{}", self.grid),
            (ProblemKind::OseenMac, _) => format!("oseen-g{}", self.grid),
            (ProblemKind::Synthetic, Some(p)) => {
                let sym = if self.symmetric_a { "-sym" } else { "" };
                format!("synthetic-n{}-m{}-d{}-s{}{}", p.n, p.m, p.deficiency, p.seed, sym)
            }
            (ProblemKind::Synthetic, None) => "synthetic".into(),
        }
    }
}

/// Builds the system described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<SaddlePointSystem> {
    spec.validate()?;
    let (a, b) = match spec.kind {
        ProblemKind::StokesMac => mac::stokes(spec.grid, spec.nu)?,
        ProblemKind::OseenMac => mac::oseen(spec.grid, spec.nu)?,
        ProblemKind::Synthetic => {
            let p = spec.synthetic.expect("validated");
            synthetic::blocks(&p, spec.symmetric_a)?
        }
    };
    let ones = vec![1.0; a.nrows() + b.nrows()];
    let provenance = serde_json::to_string(spec)?;
    Ok(SaddlePointSystem::from_solution(a, b, &ones)?.with_provenance(provenance))
}

/// `n(G)` for the MAC kinds.
pub fn mac_velocity_count(grid: usize) -> usize {
    2 * grid * (grid - 1)
}

/// `m(G)` for the MAC kinds.
pub fn mac_pressure_count(grid: usize) -> usize {
    grid * grid
}
