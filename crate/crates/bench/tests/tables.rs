use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use mgss_bench::{run_table, ExperimentPlan, InnerKind, Method, Outputs, PcEntry, PlanError, TableOutput, CSV_HEADER};
use mgss_core::krylov::GmresConfig;
use mgss_core::problems::{GeneratorSpec, SyntheticParams};

fn plan(generator: GeneratorSpec, pcs: Vec<PcEntry>, dir: &Path) -> ExperimentPlan {
    ExperimentPlan {
        outputs: Outputs::in_dir(dir, &generator.label()),
        generator,
        preconditioners: pcs,
        inner: InnerKind::Direct,
        gmres: GmresConfig::default(),
        spectra_enabled: false,
    }
}

fn all_methods(alphas: &[f64], betas: &[f64]) -> Vec<PcEntry> {
    [Method::None, Method::Ss, Method::Gss, Method::Mgss]
        .into_iter()
        .map(|m| PcEntry::new(m, alphas, betas))
        .collect()
}

fn opt_f64(s: &str) -> Option<f64> {
    (!s.is_empty()).then(|| s.parse().unwrap())
}

fn opt_usize(s: &str) -> Option<usize> {
    (!s.is_empty()).then(|| s.parse().unwrap())
}

#[test]
fn mgss_row_converges_and_beats_unpreconditioned() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(
        GeneratorSpec::stokes(8),
        vec![
            PcEntry::new(Method::Mgss, &[1e-3], &[1e-3]),
            PcEntry::new(Method::None, &[], &[]),
        ],
        dir.path(),
    );
    let out = run_table(&p).unwrap();
    assert_eq!(out.rows.len(), 2);
    let mgss = out.rows[0].report.as_ref().unwrap();
    assert_eq!(out.rows[0].cell.method, Method::Mgss);
    assert!(mgss.converged);
    assert!(mgss.r_k <= 1e-7);
    assert!(mgss.outer_cycles >= 1);
    assert!((1..=5).contains(&mgss.inner_in_last_cycle));
    let iters = mgss.iters();
    let (a, b) = iters.trim_end_matches(')').split_once('(').unwrap();
    assert!(a.parse::<usize>().unwrap() >= 1);
    assert!((1..=5).contains(&b.parse::<usize>().unwrap()));

    let none = out.rows[1].report.as_ref().unwrap();
    assert!(none.total_inner > mgss.total_inner, "{} vs {}", none.total_inner, mgss.total_inner);
}

#[test]
fn empty_preconditioner_list_is_a_plan_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_table(&plan(GeneratorSpec::stokes(4), vec![], dir.path())).unwrap_err();
    assert!(matches!(err.downcast_ref::<PlanError>(), Some(PlanError::NoPreconditioners)));
    assert!(!dir.path().join("stokes-g4.csv").exists());
}

#[test]
fn rows_follow_plan_order() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(GeneratorSpec::oseen(4), all_methods(&[1e-2, 1e-3], &[1e-3, 1e-4]), dir.path());
    let out = run_table(&p).unwrap();
    let expected: Vec<_> = p
        .preconditioners
        .iter()
        .flat_map(|e| e.pairs().into_iter().map(move |(a, b)| (e.method, a, b)))
        .collect();
    let got: Vec<_> = out.rows.iter().map(|r| (r.cell.method, r.cell.alpha, r.cell.beta)).collect();
    assert_eq!(got, expected);
    assert_eq!(out.rows.len(), 1 + 2 + 4 + 4);
}

#[test]
fn csv_and_json_hold_the_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(GeneratorSpec::oseen(5), all_methods(&[1e-2, 1e-4], &[1e-3]), dir.path());
    run_table(&p).unwrap();

    let json: TableOutput = serde_json::from_str(&std::fs::read_to_string(&p.outputs.json_path).unwrap()).unwrap();
    let mut reader = csv::Reader::from_path(&p.outputs.csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.join(","), CSV_HEADER);
    let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), json.rows.len());

    for (rec, row) in records.iter().zip(&json.rows) {
        assert_eq!(&rec[0], row.spec);
        assert_eq!(opt_f64(&rec[1]), row.cell.alpha);
        assert_eq!(opt_f64(&rec[2]), row.cell.beta);
        assert_eq!(&rec[3], row.cell.method.to_string());
        assert_eq!(&rec[4], row.inner);
        let r = row.report.as_ref();
        assert_eq!(opt_usize(&rec[5]), r.map(|r| r.outer_cycles));
        assert_eq!(opt_usize(&rec[6]), r.map(|r| r.inner_in_last_cycle));
        assert_eq!(opt_usize(&rec[7]), r.map(|r| r.total_inner));
        assert_eq!(opt_f64(&rec[8]), r.map(|r| r.r_k));
        assert_eq!(rec[9].parse::<bool>().unwrap(), row.converged());
        assert_eq!(opt_f64(&rec[10]), r.map(|r| r.wall_time.as_secs_f64()));
    }
}

fn csv_without_wall_time(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identical_plans_give_identical_csv() {
    let synthetic = GeneratorSpec::synthetic(
        SyntheticParams {
            n: 30,
            m: 14,
            deficiency: 2,
            density: 0.3,
            seed: 11,
        },
        false,
    );
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for generator in [GeneratorSpec::stokes(6), synthetic] {
        let pcs = all_methods(&[1e-2, 1e-3], &[1e-2, 1e-4]);
        let p1 = plan(generator, pcs.clone(), d1.path());
        let p2 = plan(generator, pcs, d2.path());
        run_table(&p1).unwrap();
        run_table(&p2).unwrap();
        let (a, b) = (
            csv_without_wall_time(&p1.outputs.csv_path),
            csv_without_wall_time(&p2.outputs.csv_path),
        );
        assert!(a.lines().count() > 1);
        assert_eq!(a, b);
    }
}

#[test]
fn inexact_inner_solves_are_reported_as_gmres() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan(GeneratorSpec::stokes(6), vec![PcEntry::new(Method::Mgss, &[1e-1], &[1e-1])], dir.path());
    p.inner = InnerKind::Gmres {
        restart: 5,
        tol: 1e-5,
        max_iters: 1000,
    };
    let out = run_table(&p).unwrap();
    assert_eq!(out.rows[0].inner, "gmres");
    assert!(out.rows[0].converged(), "{:?}", out.rows[0].error);
}

#[test]
fn spectra_produce_one_plot_per_preconditioned_cell() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan(GeneratorSpec::stokes(4), all_methods(&[1e-2], &[1e-3]), dir.path());
    p.spectra_enabled = true;
    let out = run_table(&p).unwrap();
    assert_eq!(out.spectra.len(), 3);
    assert_eq!(out.block_spectrum.as_ref().unwrap().len(), out.n + out.m);
    for rec in &out.spectra {
        let precond = rec.precond.as_ref().unwrap();
        assert!(precond.circle_ok);
        assert!(rec.gamma.as_ref().unwrap().theta < 1.0);
        assert!(dir.path().join(rec.svg.as_ref().unwrap()).is_file());
    }
    let files: BTreeSet<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    // csv, json, the block spectrum and three preconditioned spectra; no leftovers
    assert_eq!(files.len(), 6, "{files:?}");
    assert!(files.contains("stokes-g4-block.svg"));
}

#[test]
fn cli_writes_outputs_and_rejects_unknown_methods() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_mgss"))
        .args(["--kind", "stokes", "--grid", "4", "--pc", "none,mgss", "--alpha", "1e-3", "--beta", "1e-3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.contains("mgss"));
    let csv = std::fs::read_to_string(dir.path().join("stokes-g4.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let bad = Command::new(env!("CARGO_BIN_EXE_mgss"))
        .args(["--pc", "hss", "--grid", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!bad.status.success());
}
