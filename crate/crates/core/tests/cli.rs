use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const SMALL: &str = "[grid]\nL = 4.0\nn = 16\n\n[sweep]\nc_values = [0.36, 0.0, 0.19]\n\n[convergence]\nn_values = [16, 24, 32]\n";

struct Run {
    code: i32,
    report: Value,
    path: PathBuf,
}

fn dil(dir: &Path, name: &str, args: &[&str], env: &[(&str, &str)]) -> Run {
    let config = dir.join("small.toml");
    if !config.exists() {
        std::fs::write(&config, SMALL).unwrap();
    }
    let path = dir.join(format!("{name}.json"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dil"));
    cmd.args(args).arg("--config").arg(&config).arg("--out").arg(&path);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let status = cmd.status().unwrap();
    let report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    Run { code: status.code().unwrap(), report, path }
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(include_str!("../schema/run_report.schema.json")).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(report: &Value) {
    let v = validator();
    let errors: Vec<String> = v.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn every_subcommand_reports_against_the_schema() {
    let dir = TempDir::new().unwrap();
    for sub in ["algebra-check", "index", "zero-modes", "sweep", "convergence", "winding", "opcalc-selftest"] {
        let run = dil(dir.path(), sub, &[sub], &[]);
        assert_valid(&run.report);
        assert_eq!(run.report["subcommand"], sub);
        assert_eq!(run.report["exit_code"], run.code);
        // small grids may miss strict checks, but never crash or misreport
        assert!(run.code == 0 || run.code == 1, "{sub}: {}", run.code);
    }
}

#[test]
fn passing_runs_exit_zero() {
    let dir = TempDir::new().unwrap();
    for sub in ["winding", "opcalc-selftest", "algebra-check"] {
        let run = dil(dir.path(), sub, &[sub], &[]);
        assert_eq!(run.code, 0, "{sub}: {}", run.report["checks"]);
        assert_eq!(run.report["status"], "pass");
    }
}

#[test]
fn failed_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let run = dil(dir.path(), "strict", &["index"], &[("DIL_INDEX_LOC_MIN", "1.0")]);
    assert_eq!(run.code, 1);
    assert_eq!(run.report["status"], "fail");
    assert!(run.report["error"].is_null());
    assert_valid(&run.report);
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for (name, env) in [("tiny", ("DIL_GRID_N", "3")), ("unknown", ("DIL_GRID_X", "1")), ("typed", ("DIL_SOLVER_K", "ten"))] {
        let run = dil(dir.path(), name, &["index"], &[env]);
        assert_eq!(run.code, 2, "{name}");
        assert!(run.report["error"].is_string());
        assert_valid(&run.report);
    }
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[grid]\nspacing = 0.1\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_dil")).args(["index", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let missing = Command::new(env!("CARGO_BIN_EXE_dil")).args(["index", "--config", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let unknown = Command::new(env!("CARGO_BIN_EXE_dil")).arg("frobnicate").output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn unreachable_tolerance_exits_three() {
    let dir = TempDir::new().unwrap();
    let run = dil(dir.path(), "tol", &["index"], &[("DIL_SOLVER_TOL", "1e-300")]);
    assert_eq!(run.code, 3);
    assert!(run.report["error"].as_str().unwrap().contains("converge"));
    assert_valid(&run.report);
}

#[test]
fn serial_runs_are_bit_reproducible() {
    // same file name in two places, since reports record their side files
    let (da, db) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let a = dil(da.path(), "run", &["index", "--serial"], &[]);
    let b = dil(db.path(), "run", &["index", "--serial"], &[]);
    assert!(a.report["timings"].is_null());
    let strip = |r: &Run| {
        let text = std::fs::read_to_string(&r.path).unwrap();
        text.replace(&r.path.parent().unwrap().display().to_string(), "")
    };
    assert_eq!(strip(&a), strip(&b));
    let csv = |p: &Path| std::fs::read(p.with_file_name(format!("{}.spectrum.csv", p.file_stem().unwrap().to_string_lossy()))).unwrap();
    assert_eq!(csv(&a.path), csv(&b.path));
}

#[test]
fn seed_and_environment_override_the_file() {
    let dir = TempDir::new().unwrap();
    let run = dil(dir.path(), "over", &["winding", "--seed", "42"], &[("DIL_GRID_N", "20"), ("DIL_WINDING_SAMPLES", "128")]);
    let cfg = &run.report["config"];
    assert_eq!(cfg["seed"], 42);
    assert_eq!(cfg["grid.n"], 20);
    assert_eq!(cfg["winding.samples"], 128);
    assert_eq!(cfg["grid.L"], 4.0);
}

#[test]
fn sweep_rows_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let run = dil(dir.path(), "sweep", &["sweep"], &[]);
    let text = std::fs::read_to_string(dir.path().join("sweep.sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("c,delta"));
    let cs: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(cs, vec![0.36, 0.0, 0.19]);
    assert_eq!(run.report["results"]["rows"].as_array().map(Vec::len), Some(3));
}
