use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use mgss_core::dense::{eig_general, ComplexSpectrum};
use mgss_core::krylov::{gmres_restarted, LinearOperator, SolveReport};
use mgss_core::precond::MgssPreconditioner;
use mgss_core::problems::generate;
use mgss_core::saddle::{build_omega, SaddlePointSystem};
use mgss_core::spectra::{gamma_spectrum, precond_spectrum, GammaSpectrumReport, PrecondSpectrumReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::write_atomic;
use crate::plan::{ExperimentPlan, Method};
use crate::svg::emit_eigen_scatter;

/// One `(method, α, β)` combination of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub method: Method,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl Cell {
    fn file_stem(&self, spec: &str) -> String {
        let mut s = format!("{spec}-{}", self.method);
        if let Some(a) = self.alpha {
            write!(s, "-a{a:e}").unwrap();
        }
        if let Some(b) = self.beta {
            write!(s, "-b{b:e}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub spec: String,
    #[serde(flatten)]
    pub cell: Cell,
    /// Empty for the unpreconditioned method.
    pub inner: String,
    /// Missing when setting up or applying the preconditioner failed.
    pub report: Option<SolveReport>,
    pub error: Option<String>,
}

impl TableRow {
    pub fn converged(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.converged)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumRecord {
    #[serde(flatten)]
    pub cell: Cell,
    pub precond: Option<PrecondSpectrumReport>,
    pub gamma: Option<GammaSpectrumReport>,
    /// File name of the scatter plot, relative to the SVG directory.
    pub svg: Option<String>,
    pub error: Option<String>,
}

/// Everything a plan run produces; serialized verbatim as the JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableOutput {
    pub plan: ExperimentPlan,
    pub spec: String,
    pub n: usize,
    pub m: usize,
    pub rank_b: usize,
    pub rows: Vec<TableRow>,
    /// Spectrum of the unpreconditioned block matrix.
    pub block_spectrum: Option<ComplexSpectrum>,
    pub spectra: Vec<SpectrumRecord>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    spec: &'a str,
    alpha: Option<f64>,
    beta: Option<f64>,
    method: String,
    inner: &'a str,
    outer: Option<usize>,
    inner_last: Option<usize>,
    total_inner: Option<usize>,
    #[serde(rename = "R_k")]
    r_k: Option<f64>,
    converged: bool,
    wall_time_s: Option<f64>,
}

/// Generates the instance, solves it once per cell (cells run in parallel,
/// rows keep plan order) and writes the CSV, JSON and optional SVG files.
pub fn run_table(plan: &ExperimentPlan) -> Result<TableOutput> {
    plan.validate()?;
    let sys = generate(&plan.generator).context("generating the test problem")?;
    let spec = plan.generator.label();
    let cells: Vec<Cell> = plan
        .preconditioners
        .iter()
        .flat_map(|e| {
            e.pairs().into_iter().map(|(alpha, beta)| Cell {
                method: e.method,
                alpha,
                beta,
            })
        })
        .collect();

    let rows: Vec<TableRow> = cells.par_iter().map(|cell| solve_cell(plan, &sys, &spec, *cell)).collect();

    let (block_spectrum, spectra) = if plan.spectra_enabled {
        let block = eig_general(&sys.block().to_dense()).ok();
        let records: Vec<SpectrumRecord> = cells
            .par_iter()
            .filter(|c| c.method != Method::None)
            .map(|cell| spectrum_cell(&sys, *cell))
            .collect();
        (block, records)
    } else {
        (None, Vec::new())
    };

    let mut out = TableOutput {
        plan: plan.clone(),
        spec,
        n: sys.n(),
        m: sys.m(),
        rank_b: sys.rank_b(),
        rows,
        block_spectrum,
        spectra,
    };

    if let Some(dir) = plan.outputs.svg_dir.as_ref().filter(|_| plan.spectra_enabled) {
        write_scatter_plots(&mut out, dir)?;
    }
    let csv = csv_string(&out.rows)?;
    write_atomic(&plan.outputs.csv_path, csv.as_bytes())
        .with_context(|| format!("writing {}", plan.outputs.csv_path.display()))?;
    let json = serde_json::to_string_pretty(&out)?;
    write_atomic(&plan.outputs.json_path, json.as_bytes())
        .with_context(|| format!("writing {}", plan.outputs.json_path.display()))?;
    Ok(out)
}

fn solve_cell(plan: &ExperimentPlan, sys: &SaddlePointSystem, spec: &str, cell: Cell) -> TableRow {
    let rhs = sys.rhs();
    let outcome = match cell.method.shift_mode() {
        None => gmres_restarted(sys.block(), None, &rhs, None, &plan.gmres),
        Some(mode) => {
            let alpha = cell.alpha.unwrap_or(f64::NAN);
            build_omega(mode, sys.a(), sys.b(), alpha, cell.beta.unwrap_or(alpha))
                .and_then(|shift| MgssPreconditioner::factor(sys, shift, plan.inner.strategy()))
                .and_then(|pc| gmres_restarted(sys.block(), Some(&pc as &dyn LinearOperator), &rhs, None, &plan.gmres))
        }
    };
    let inner = match cell.method {
        Method::None => String::new(),
        _ => plan.inner.name().to_string(),
    };
    let (report, error) = match outcome {
        Ok((_, report)) => (Some(report), None),
        Err(e) => (None, Some(e.to_string())),
    };
    TableRow {
        spec: spec.to_string(),
        cell,
        inner,
        report,
        error,
    }
}

fn spectrum_cell(sys: &SaddlePointSystem, cell: Cell) -> SpectrumRecord {
    let mode = cell.method.shift_mode().expect("preconditioned cell");
    let alpha = cell.alpha.unwrap_or(f64::NAN);
    let computed = build_omega(mode, sys.a(), sys.b(), alpha, cell.beta.unwrap_or(alpha))
        .and_then(|shift| Ok((precond_spectrum(sys, &shift)?, gamma_spectrum(sys, &shift)?)));
    match computed {
        Ok((p, g)) => SpectrumRecord {
            cell,
            precond: Some(p),
            gamma: Some(g),
            svg: None,
            error: None,
        },
        Err(e) => SpectrumRecord {
            cell,
            precond: None,
            gamma: None,
            svg: None,
            error: Some(e.to_string()),
        },
    }
}

fn write_scatter_plots(out: &mut TableOutput, dir: &Path) -> Result<()> {
    if let Some(block) = &out.block_spectrum {
        emit_eigen_scatter(block, &dir.join(format!("{}-block.svg", out.spec)))?;
    }
    for rec in &mut out.spectra {
        if let Some(p) = &rec.precond {
            let name = format!("{}.svg", rec.cell.file_stem(&out.spec));
            emit_eigen_scatter(p, &dir.join(&name))?;
            rec.svg = Some(name);
        }
    }
    Ok(())
}

fn csv_string(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        let r = row.report.as_ref();
        w.serialize(CsvRow {
            spec: &row.spec,
            alpha: row.cell.alpha,
            beta: row.cell.beta,
            method: row.cell.method.to_string(),
            inner: &row.inner,
            outer: r.map(|r| r.outer_cycles),
            inner_last: r.map(|r| r.inner_in_last_cycle),
            total_inner: r.map(|r| r.total_inner),
            r_k: r.map(|r| r.r_k),
            converged: row.converged(),
            wall_time_s: r.map(|r| r.wall_time.as_secs_f64()),
        })?;
    }
    // an empty row list still needs the header line
    if rows.is_empty() {
        return Ok(format!("{}\n", crate::output::CSV_HEADER));
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Fixed-width text table; non-converged runs show `--` for the iteration
/// count.
pub fn render_table(rows: &[TableRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.0e}"));
    let mut s = format!(
        "{:<14} {:<6} {:>6} {:>6} {:<7} {:>10} {:>10} {:>9}\n",
        "spec", "method", "alpha", "beta", "inner", "iters", "R_k", "time(s)"
    );
    for row in rows {
        let (iters, rk, time) = match &row.report {
            Some(r) => (
                r.iters_or_dashes(),
                format!("{:.2e}", r.r_k),
                format!("{:.3}", r.wall_time.as_secs_f64()),
            ),
            None => ("--".into(), "-".into(), "-".into()),
        };
        writeln!(
            s,
            "{:<14} {:<6} {:>6} {:>6} {:<7} {:>10} {:>10} {:>9}",
            row.spec,
            row.cell.method,
            opt(row.cell.alpha),
            opt(row.cell.beta),
            if row.inner.is_empty() { "-" } else { &row.inner },
            iters,
            rk,
            time
        )
        .unwrap();
        if let Some(e) = &row.error {
            writeln!(s, "    error: {e}").unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::CSV_HEADER;

    #[test]
    fn csv_header_is_fixed() {
        let row = TableRow {
            spec: "x".into(),
            cell: Cell {
                method: Method::None,
                alpha: None,
                beta: None,
            },
            inner: String::new(),
            report: None,
            error: Some("boom".into()),
        };
        let text = csv_string(&[row]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("x,,,none,,,,,,false,"));
        assert_eq!(csv_string(&[]).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn file_stems_encode_parameters() {
        let c = Cell {
            method: Method::Mgss,
            alpha: Some(1e-3),
            beta: Some(1e-2),
        };
        assert_eq!(c.file_stem("stokes-g8"), "stokes-g8-mgss-a1e-3-b1e-2");
    }
}
