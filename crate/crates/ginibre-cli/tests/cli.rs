use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ginibre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginibre")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fig1_pair_correlation_approaches_the_bulk_density_squared() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let out = ginibre(&["eval", "--preset", "fig:1", "--out", arg(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let data = rows(&csv);
    assert_eq!(data.len(), 241);
    let (first, last) = (data[0][1], data[240][1]);
    assert!((first - 1.0 / (2.0 * PI)).abs() < 1e-6, "{first}");
    assert!((last - 1.0 / (2.0 * PI)).abs() < 1e-6, "{last}");
    // Repulsion at coincidence.
    assert!(data[120][1].abs() < 1e-12);
}

#[test]
fn fig5_edge_density_interpolates_between_bulk_and_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig5.csv");
    let out = ginibre(&["eval", "--preset", "fig5", "--out", arg(&csv)]);
    assert_eq!(code(&out), 0);
    let data = rows(&csv);
    assert!((data[0][1] - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-3);
    assert!(data[240][1] < 1e-10);
    assert!(data.windows(2).skip(100).all(|w| w[1][1] <= w[0][1] + 1e-15));
}

#[test]
fn sidecar_records_the_request() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("finite.csv");
    let out = ginibre(&[
        "eval", "--regime", "finite", "--M", "6", "--observable", "R_10", "--grid", "-3:3:4", "--out", arg(&csv),
        "--gnuplot",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("finite.json")).unwrap()).unwrap();
    assert_eq!(meta["M"], 6);
    assert_eq!(meta["regime_name"], "finite");
    assert_eq!(meta["observable"], "R_10");
    assert_eq!(meta["points"], 4);
    assert!(meta["tolerances"]["pivot_threshold"].as_f64().unwrap() > 0.0);
    assert!(meta["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert!(!meta["version"].as_str().unwrap().is_empty());
    assert!(dir.path().join("finite.gp").exists());
}

#[test]
fn degenerate_two_point_grid() {
    let out = ginibre(&["eval", "--regime", "origin", "--observable", "R_10", "--grid", "0:0:2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().next(), Some("x,value"));
}

#[test]
fn invalid_requests_exit_with_two_and_one_line() {
    for args in [
        &["eval", "--regime", "complex-bulk", "--observable", "R_10", "--grid", "0:1:3"][..],
        &["eval", "--regime", "origin", "--observable", "R_10", "--grid", "0:1:1"],
        &["eval", "--regime", "real-edge", "--u-re", "0.5", "--observable", "R_10", "--grid", "0:1:3"],
        &["eval", "--regime", "finite", "--observable", "R_10", "--grid", "0:1:3"],
        &["eval", "--regime", "origin", "--observable", "R_99", "--grid", "0:1:3"],
        &["eval", "--preset", "fig:42"],
        &["converge", "--regime", "origin", "--M", "100,25"],
        &["converge", "--regime", "origin", "--M", "1000"],
        &["eval", "--no-such-flag"],
    ] {
        let out = ginibre(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn validate_pfaffian_suite_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = ginibre(&["validate", "--suite", "pfaffian", "--out", arg(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let checks: Vec<&Value> = r["criteria"].as_array().unwrap().iter().flat_map(|c| c["checks"].as_array().unwrap()).collect();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "target", "measured", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert_eq!(c["pass"], true);
    }
}

#[test]
fn tiny_budget_exhausts() {
    let out = ginibre(&["validate", "--suite", "montecarlo", "--samples", "10"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn converge_decreases_at_the_real_edge() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("edge.csv");
    let out = ginibre(&["converge", "--regime", "real-edge", "--M", "50,200", "--out", arg(&csv)]);
    assert_eq!(code(&out), 0);
    let data = rows(&csv);
    assert_eq!(data.len(), 2);
    assert!(data[1][1] < data[0][1]);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("edge.json")).unwrap()).unwrap();
    assert_eq!(meta["monotone"], true);
}

#[test]
fn converge_complex_bulk_density_reaches_one_over_pi() {
    let out = ginibre(&["converge", "--regime", "complex-bulk", "--u-re", "0.3", "--u-im", "0.4", "--M", "25,100,400"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[2] - 1.0 / PI).abs() <= 1e-3, "{}", last[2]);
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let args = ["eval", "--preset", "fig:4", "--grid", "-2:2:9,-2:2:9"];
    let a = ginibre(&args);
    let b = ginibre(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let s = ["sample", "--n", "6", "--samples", "300", "--seed", "9", "--grid", "-3:3:6"];
    assert_eq!(ginibre(&s).stdout, ginibre(&s).stdout);
}

#[test]
fn flags_override_config_presets() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ginibre.toml");
    std::fs::write(
        &cfg,
        "observable = \"R_10\"\n[preset.edge]\nregime = \"real-edge\"\ngrid = \"-2:2:5\"\n",
    )
    .unwrap();
    let from_config = ginibre(&["--config", arg(&cfg), "eval", "--preset", "edge"]);
    assert_eq!(code(&from_config), 0, "{}", String::from_utf8_lossy(&from_config.stderr));
    assert_eq!(String::from_utf8(from_config.stdout).unwrap().lines().count(), 6);
    let overridden = ginibre(&["--config", arg(&cfg), "eval", "--preset", "edge", "--grid", "-2:2:3"]);
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    let origin = ginibre(&["--config", arg(&cfg), "eval", "--preset", "edge", "--regime", "origin"]);
    let last = String::from_utf8(origin.stdout).unwrap();
    let v: f64 = last.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
}

#[test]
fn sample_reports_real_eigenvalue_count() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("real.csv");
    let out = ginibre(&["sample", "--n", "2", "--samples", "4000", "--grid", "-3:3:6", "--out", arg(&csv)]);
    assert_eq!(code(&out), 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("real.json")).unwrap()).unwrap();
    let (mean, se) = (meta["mean_real_count"].as_f64().unwrap(), meta["mean_real_count_std_error"].as_f64().unwrap());
    assert!((mean - 2f64.sqrt()).abs() < 4.0 * se, "{mean} ± {se}");
    assert_eq!(meta["failures"], 0);
}

#[test]
fn figures_writes_every_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = ginibre(&["figures", "--out", arg(dir.path())]);
    assert_eq!(code(&out), 0);
    for k in 1..=8 {
        for ext in ["csv", "json", "gp"] {
            assert!(dir.path().join(format!("fig_{k}.{ext}")).exists(), "fig_{k}.{ext}");
        }
    }
    let index: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("index.json")).unwrap()).unwrap();
    assert_eq!(index.as_array().unwrap().len(), 8);
}
