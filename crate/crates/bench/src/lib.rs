//! Experiment driver on top of `mgss-core`: parameter sweeps over the
//! shift-splitting preconditioners, CSV/JSON result tables and SVG scatter
//! plots of computed spectra.

mod output;
mod plan;
mod run;
mod svg;

pub use output::{write_atomic, CSV_HEADER};
pub use plan::{ExperimentPlan, InnerKind, Method, Outputs, PcEntry, PlanError};
pub use run::{render_table, run_table, Cell, SpectrumRecord, TableOutput, TableRow};
pub use svg::{emit_eigen_scatter, render_eigen_scatter, ScatterSource};
