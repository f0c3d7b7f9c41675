use std::path::PathBuf;

use mgss_core::krylov::GmresConfig;
use mgss_core::precond::InnerStrategy;
use mgss_core::problems::GeneratorSpec;
use mgss_core::saddle::ShiftMode;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error("plan lists no preconditioners")]
    NoPreconditioners,
    #[error("{method} entry has an empty {which} list")]
    EmptyGrid { method: Method, which: &'static str },
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("invalid generator: {0}")]
    Generator(#[from] mgss_core::Error),
}

/// Preconditioner used for the outer GMRES.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    None,
    Ss,
    Gss,
    Mgss,
}

impl Method {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Some(Method::None),
            "ss" => Some(Method::Ss),
            "gss" => Some(Method::Gss),
            "mgss" => Some(Method::Mgss),
            _ => None,
        }
    }

    pub fn shift_mode(self) -> Option<ShiftMode> {
        match self {
            Method::None => None,
            Method::Ss => Some(ShiftMode::Ss),
            Method::Gss => Some(ShiftMode::Gss),
            Method::Mgss => Some(ShiftMode::Mgss),
        }
    }

    /// Whether the method reads `β` at all.
    pub fn uses_beta(self) -> bool {
        matches!(self, Method::Gss | Method::Mgss)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Method::None => "none",
            Method::Ss => "ss",
            Method::Gss => "gss",
            Method::Mgss => "mgss",
        })
    }
}

/// One preconditioner together with its parameter grid. `none` ignores both
/// lists and `ss` ignores `betas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEntry {
    pub method: Method,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl PcEntry {
    pub fn new(method: Method, alphas: &[f64], betas: &[f64]) -> Self {
        Self {
            method,
            alphas: alphas.to_vec(),
            betas: betas.to_vec(),
        }
    }

    /// `(α, β)` pairs in row-major order, `None` where the method has no such
    /// parameter.
    pub fn pairs(&self) -> Vec<(Option<f64>, Option<f64>)> {
        match self.method {
            Method::None => vec![(None, None)],
            Method::Ss => self.alphas.iter().map(|&a| (Some(a), None)).collect(),
            Method::Gss | Method::Mgss => self
                .alphas
                .iter()
                .flat_map(|&a| self.betas.iter().map(move |&b| (Some(a), Some(b))))
                .collect(),
        }
    }
}

/// How the Schur complement system inside the preconditioner is solved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum InnerKind {
    Direct,
    Gmres { restart: usize, tol: f64, max_iters: usize },
}

impl InnerKind {
    pub fn strategy(self) -> InnerStrategy {
        match self {
            InnerKind::Direct => InnerStrategy::Direct,
            InnerKind::Gmres { restart, tol, max_iters } => InnerStrategy::IterativeSchur { restart, tol, max_iters },
        }
    }

    pub fn name(self) -> &'static str {
        self.strategy().name()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    /// Directory for one scatter plot per preconditioned cell; only used when
    /// spectra are enabled.
    pub svg_dir: Option<PathBuf>,
}

impl Outputs {
    /// `<dir>/<stem>.csv`, `<dir>/<stem>.json` and SVGs under `<dir>`.
    pub fn in_dir(dir: impl Into<PathBuf>, stem: &str) -> Self {
        let dir = dir.into();
        Self {
            csv_path: dir.join(format!("{stem}.csv")),
            json_path: dir.join(format!("{stem}.json")),
            svg_dir: Some(dir),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub generator: GeneratorSpec,
    pub preconditioners: Vec<PcEntry>,
    pub inner: InnerKind,
    pub gmres: GmresConfig,
    pub outputs: Outputs,
    pub spectra_enabled: bool,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), PlanError> {
        if self.preconditioners.is_empty() {
            return Err(PlanError::NoPreconditioners);
        }
        self.generator.validate()?;
        self.gmres.validate()?;
        for entry in &self.preconditioners {
            if entry.method == Method::None {
                continue;
            }
            if entry.alphas.is_empty() {
                return Err(PlanError::EmptyGrid { method: entry.method, which: "alpha" });
            }
            if entry.method.uses_beta() && entry.betas.is_empty() {
                return Err(PlanError::EmptyGrid { method: entry.method, which: "beta" });
            }
            for &value in &entry.alphas {
                positive("alpha", value)?;
            }
            if entry.method.uses_beta() {
                for &value in &entry.betas {
                    positive("beta", value)?;
                }
            }
        }
        if let InnerKind::Gmres { restart, tol, max_iters } = self.inner {
            positive("inner tolerance", tol)?;
            positive("inner restart", restart as f64)?;
            positive("inner iteration cap", max_iters as f64)?;
        }
        Ok(())
    }
}

fn positive(what: &'static str, value: f64) -> Result<(), PlanError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PlanError::NonPositive { what, value })
    }
}
