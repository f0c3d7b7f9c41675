use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, ValueEnum};
use mgss_bench::{render_table, run_table, ExperimentPlan, InnerKind, Method, Outputs, PcEntry};
use mgss_core::krylov::GmresConfig;
use mgss_core::problems::{GeneratorSpec, SyntheticParams};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Stokes,
    Oseen,
    Synthetic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Inner {
    Direct,
    Gmres,
}

/// Solve a generated saddle point system with GMRES under each requested
/// shift-splitting preconditioner and write the results as CSV, JSON and SVG.
#[derive(Debug, Parser)]
#[command(name = "mgss", version)]
struct Args {
    #[arg(long, value_enum, default_value = "stokes")]
    kind: Kind,
    /// Cells per side of the MAC grid.
    #[arg(long, default_value_t = 16)]
    grid: usize,
    /// Viscosity; defaults to 1 for Stokes and 0.01 for Oseen.
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    beta: Vec<f64>,
    /// Comma-separated subset of none, ss, gss, mgss.
    #[arg(long, value_delimiter = ',', default_value = "none,ss,gss,mgss")]
    pc: Vec<String>,
    #[arg(long, value_enum, default_value = "direct")]
    inner: Inner,
    /// Restart length of the outer and inner GMRES.
    #[arg(long, default_value_t = 5)]
    restart: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    maxit: usize,
    #[arg(long, default_value_t = 1e-5)]
    inner_tol: f64,
    /// Also compute spectra and write eigenvalue scatter plots.
    #[arg(long)]
    spectra: bool,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Seed of the synthetic generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Synthetic: number of velocity-like unknowns.
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Synthetic: number of constraint rows.
    #[arg(long, default_value_t = 20)]
    m: usize,
    /// Synthetic: rank deficiency of B.
    #[arg(long, default_value_t = 2)]
    deficiency: usize,
    /// Synthetic: fill fraction of the random blocks.
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    /// Synthetic: make A symmetric.
    #[arg(long)]
    symmetric: bool,
}

fn main() -> Result<()> {
    let args = Args::parse();
    let mut generator = match args.kind {
        Kind::Stokes => GeneratorSpec::stokes(args.grid),
        Kind::Oseen => GeneratorSpec::oseen(args.grid),
        Kind::Synthetic => GeneratorSpec::synthetic(
            SyntheticParams {
                n: args.n,
                m: args.m,
                deficiency: args.deficiency,
                density: args.density,
                seed: args.seed,
            },
            args.symmetric,
        ),
    };
    if let Some(nu) = args.nu {
        generator = generator.with_nu(nu);
    }
    let mut preconditioners = Vec::new();
    for name in args.pc.iter().filter(|s| !s.trim().is_empty()) {
        let Some(method) = Method::parse(name) else {
            bail!("unknown preconditioner {name:?}; expected none, ss, gss or mgss");
        };
        preconditioners.push(PcEntry::new(method, &args.alpha, &args.beta));
    }
    let inner = match args.inner {
        Inner::Direct => InnerKind::Direct,
        Inner::Gmres => InnerKind::Gmres {
            restart: args.restart,
            tol: args.inner_tol,
            max_iters: args.maxit,
        },
    };
    let plan = ExperimentPlan {
        outputs: Outputs::in_dir(&args.out, &generator.label()),
        generator,
        preconditioners,
        inner,
        gmres: GmresConfig {
            restart: args.restart,
            rel_tol: args.tol,
            max_iters: args.maxit,
            audit: false,
        },
        spectra_enabled: args.spectra,
    };
    let out = run_table(&plan)?;
    println!("{} (n = {}, m = {}, rank B = {})", out.spec, out.n, out.m, out.rank_b);
    print!("{}", render_table(&out.rows));
    println!("wrote {} and {}", plan.outputs.csv_path.display(), plan.outputs.json_path.display());
    Ok(())
}
