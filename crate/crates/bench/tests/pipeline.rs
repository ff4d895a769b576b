use std::path::Path;
use std::process::Command;

use ddm_bench::config::ExperimentConfig;
use ddm_bench::report::{derive_report, emit, render};
use ddm_bench::results_io::{load_results, results_from_csv, save_results};
use ddm_bench::{run_experiment, BenchError, OutputFormat};
use ddm_core::{build_grid, make_partition, TimingKind};

fn config(nx: usize, partitions: &str) -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.set("nx", &nx.to_string()).unwrap();
    c.set("ny", &nx.to_string()).unwrap();
    c.set("partitions", partitions).unwrap();
    c.set("reps", "2").unwrap();
    c.set("workers", "2").unwrap();
    c
}

#[test]
fn desk_config_produces_one_record_per_cell() {
    let c = config(24, "2x2,4x4,5x5");
    let rs = run_experiment(&c, |_| {}).unwrap();
    assert_eq!(rs.runs.len(), 2 * 7);
    let records = rs.records().unwrap();
    let count = |k| records.iter().filter(|r| r.kind == k).count();
    assert_eq!(count(TimingKind::Monolithic), 1);
    assert_eq!(count(TimingKind::Parallel), 3);
    assert_eq!(count(TimingKind::SingleLocal), 3);
    assert!(rs.env.as_ref().unwrap().timer_resolution_seconds > 0.0);

    // local sizes are those of the centre block of the same partition
    let grid = build_grid(24, 24).unwrap();
    for r in records.iter().filter(|r| r.kind == TimingKind::SingleLocal) {
        let side = (r.p as f64).sqrt() as usize;
        let part = make_partition(&grid, side, side).unwrap();
        assert_eq!(r.local_n, part.block(part.center_subdomain()).internal_count());
    }
    for r in rs.runs.iter().filter(|r| r.kind == TimingKind::Parallel) {
        assert!(r.residual.unwrap() <= 1e-8);
        assert_eq!(r.workers, 2);
    }

    let report = derive_report(&rs).unwrap();
    assert_eq!(report.rows.iter().map(|r| r.p).collect::<Vec<_>>(), [1, 4, 16, 25]);
    for row in &report.rows {
        let e = row.e_dc.unwrap();
        assert!((e - row.speedup.unwrap() / row.s_dc.unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn single_processor_run_has_unit_efficiencies() {
    let rs = run_experiment(&config(16, "1x1"), |_| {}).unwrap();
    assert_eq!(rs.records().unwrap().len(), 1);
    let report = derive_report(&rs).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].standard_efficiency(), Some(1.0));
    assert_eq!(report.rows[0].e_dc, Some(1.0));
}

#[test]
fn unreachable_tolerance_records_a_failure_row() {
    let mut c = config(20, "2x2");
    c.set("tol", "1e-300").unwrap();
    let rs = run_experiment(&c, |_| {}).unwrap();
    let failed: Vec<_> = rs.runs.iter().filter(|r| r.seconds.is_none()).collect();
    assert_eq!(failed.len(), 1, "later repetitions are skipped");
    assert_eq!(failed[0].kind, TimingKind::Parallel);
    let report = derive_report(&rs).unwrap();
    assert_eq!(report.row(4).unwrap().speedup, None);
    assert!(report.row(4).unwrap().s_dc.is_some());
    assert!(report.notes.iter().any(|n| n.contains("parallel run failed")));
}

#[test]
fn saved_results_reproduce_the_same_reports() {
    let dir = tempfile::tempdir().unwrap();
    let rs = run_experiment(&config(20, "2x2,3x3"), |_| {}).unwrap();
    let csv = dir.path().join("results.csv");
    let json = dir.path().join("results.json");
    save_results(&rs, &csv).unwrap();
    save_results(&rs, &json).unwrap();

    let from_csv = load_results(&csv).unwrap();
    assert_eq!(from_csv.runs, rs.runs);
    assert_eq!(load_results(&json).unwrap(), rs);

    let before = derive_report(&rs).unwrap();
    let after = derive_report(&from_csv).unwrap();
    for f in [OutputFormat::Table, OutputFormat::Csv, OutputFormat::Json] {
        assert_eq!(render(&before, f).unwrap(), render(&after, f).unwrap());
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        emit(&before, f, &a).unwrap();
        emit(&before, f, &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }
}

#[test]
fn missing_monolithic_row_fails_at_derivation() {
    let text = "kind,p,n,local_n,workers,rep,seconds,iterations,residual\n\
                parallel,4,100,100,1,0,0.5,10,1e-9\n";
    let rs = results_from_csv(text, Path::new("m.csv")).unwrap();
    assert!(matches!(derive_report(&rs), Err(BenchError::MissingMonolithic)));
}

#[test]
fn unwritable_destination_is_reported() {
    let rs = results_from_csv(
        "kind,p,n,local_n,workers,rep,seconds,iterations,residual\nmonolithic,1,4,4,1,0,1,0,0\n",
        Path::new("x.csv"),
    )
    .unwrap();
    let report = derive_report(&rs).unwrap();
    let err = emit(&report, OutputFormat::Table, Path::new("/nonexistent/dir/r.txt")).unwrap_err();
    assert!(matches!(err, BenchError::Write { .. }));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddm-bench"))
}

#[test]
fn cli_flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!("nx = 12\nny = 12\npartitions = 2x2\nreps = 1\nformat = csv\nout = {}\n", out.display()),
    )
    .unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--nx", "10", "--format", "csv,json"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let rs = load_results(&out.join("results.json")).unwrap();
    assert_eq!(rs.config.as_ref().unwrap().nx, 10);
    assert_eq!(rs.config.as_ref().unwrap().ny, 12);
    assert!(rs.runs.iter().all(|r| r.n == 120));
    assert!(out.join("report.csv").exists() && out.join("report.json").exists());
    assert!(!out.join("report.txt").exists());
}

#[test]
fn cli_report_prints_tables_from_csv() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/reference_run.csv");
    let output = bin().arg("report").arg(&fixture).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("## Divide-and-conquer efficiency"));
    assert!(text.contains("1028.0%"));
}

#[test]
fn cli_rejects_bad_input_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "nx = 8\npartitions = 2x2\nreps = zero\n").unwrap();
    let output = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 3"));

    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "kind,p,n,local_n,workers,rep,seconds,iterations,residual\nmonolithic,1,4,4,1,0,fast,0,0\n").unwrap();
    let output = bin().arg("report").arg(&csv).output().unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 2"));
}
