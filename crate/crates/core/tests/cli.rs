//! End-to-end runs of the binary and of the sweep engine.

use std::fs;
use std::path::Path;
use std::process::Command;

use quasireg::experiments::{run_sweep, ExperimentConfig};

const CONFIG: &str = r#"
a0 = "power(0.6)"
composite = "warp(0.3)"
g0 = 0.0
g1 = 1.0
n = 501
mode = "noisy_c1"
alpha_rule = "delta"
delta_list = [1e-2, 1e-3, 1e-4]
seeds = [0, 1]
output_dir = "out"
"#;

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("study.toml");
    fs::write(&path, text).unwrap();
    path
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasireg"))
}

#[test]
fn sweep_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rates = fs::read_to_string(dir.path().join("out/rates.csv")).unwrap();
    assert!(rates.starts_with("delta,seed,alpha,eps,h,err_l2,err_h1\n"));
    assert_eq!(rates.lines().count(), 1 + 3 * 2);
    for name in ["rates.dat", "summary.csv", "summary.dat", "fit.txt"] {
        assert!(dir.path().join("out").join(name).exists(), "{name}");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("slope_l2"));
}

#[test]
fn solve_writes_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin().args(["solve", "--config"]).arg(&cfg).args(["--delta", "1e-3", "--seed", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/a_alpha.csv")).unwrap();
    assert!(csv.starts_with("x,a0,a_alpha\n"));
    assert_eq!(csv.lines().count(), 1 + 501);
    assert!(dir.path().join("out/a_alpha.dat").exists());
}

#[test]
fn exit_codes_name_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), &CONFIG.replace("[1e-2, 1e-3, 1e-4]", "[1e-4, 1e-2]"));
    let out = bin().args(["sweep", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly decreasing"));

    let cfg = write_config(dir.path(), CONFIG);
    let out = bin().args(["solve", "--config"]).arg(&cfg).args(["--delta", "0.4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps"));
}

#[test]
fn check_reports_every_property() {
    let out = bin().arg("check").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn sweeps_are_deterministic_and_cells_independent() {
    let mut cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    let full = run_sweep(&cfg).unwrap();
    assert_eq!(full.rows, run_sweep(&cfg).unwrap().rows);
    cfg.delta_list = vec![1e-3];
    let subset = run_sweep(&cfg).unwrap();
    let from_full: Vec<_> = full.rows.iter().filter(|r| r.delta == 1e-3).cloned().collect();
    assert_eq!(subset.rows, from_full);
}

#[test]
fn csv_output_is_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let read = || {
        assert!(bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap().status.success());
        fs::read(dir.path().join("out/rates.csv")).unwrap()
    };
    assert_eq!(read(), read());
}
