//! Interface tests: exit-code partition, config-file merging, flag
//! precedence, output-path resolution.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-dirac"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn CLI")
}

#[test]
fn verify_pass_exits_zero_with_summary() {
    let out = run(&[
        "verify", "--ineq", "hardy_4.3", "--n", "2", "--points", "32", "--trials", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("hardy_4.3 "), "summary line: {stdout}");
    assert!(stdout.contains("constant=4"));
    assert!(stdout.contains("verdict=pass"));
    assert_eq!(stdout.lines().count(), 1);
}

#[test]
fn unknown_inequality_exits_two() {
    let out = run(&["verify", "--ineq", "nope_1.1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("unknown inequality"), "stderr: {stderr}");
}

#[test]
fn missing_tau_exits_two() {
    let out = run(&["verify", "--ineq", "example_4.1", "--n", "2", "--points", "32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_power_tau_exits_two_citing_hypothesis() {
    let out = run(&["verify", "--ineq", "thm5.1", "--tau=-1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("tau != 2k - n"), "stderr: {stderr}");
}

#[test]
fn criterion_failure_exits_one() {
    // The pure power pair never satisfies the matrix criterion.
    let out = run(&[
        "check-weights", "--ineq", "thm5.1", "--tau", "1", "--n", "2", "--samples", "32",
        "--mass",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("satisfied=false"));
}

#[test]
fn check_weights_pass_exits_zero() {
    let out = run(&[
        "check-weights", "--ineq", "example_4.1", "--tau", "1", "--n", "2", "--samples", "32",
        "--directions", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn thm5_constant_prints_value() {
    let out = run(&["thm5-constant", "--tau", "0.5", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("c=0.0625"), "stdout: {stdout}");
    assert!(stdout.contains("k=2"));
}

#[test]
fn thm5_tie_is_reported() {
    let out = run(&["thm5-constant", "--tau", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("tie"), "stdout: {stdout}");
    assert!(stdout.contains("c=0.25"));
}

#[test]
fn angular_check_fails_on_coarse_grid() {
    let out = run(&["angular-check", "--points", "16", "--lmax", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict=fail"));
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# experiment setup\nineq = agmon_4.2\nn = 2\npoints = 32\ntrials = 2\nseed = 5\n",
    )
    .unwrap();
    let out = bin()
        .arg("verify")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("agmon_4.2 "));

    // A flag beats the file: run the Hardy case against the same config.
    let out = bin()
        .args(["verify", "--ineq", "hardy_4.3"])
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("hardy_4.3 "));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "points 48\n").unwrap();
    let out = bin()
        .args(["verify", "--ineq", "hardy_4.3"])
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_two() {
    let out = run(&[
        "thm5-constant", "--tau", "0.5", "--n", "3", "--json", "/proc/nope/report.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outdir_env_var_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["thm5-constant", "--tau", "0.5", "--n", "3", "--json", "case.json"])
        .env("HARDY_DIRAC_OUTDIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written = dir.path().join("case.json");
    assert!(written.exists(), "expected {}", written.display());
    let text = std::fs::read_to_string(written).unwrap();
    assert!(text.contains("\"c\": 0.0625"));
}

#[test]
fn magnetic_verify_small_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("mag.json");
    let csv = dir.path().join("mag.csv");
    let out = bin()
        .args([
            "magnetic-verify", "--ineq", "hardy_4.3", "--n", "2", "--points", "64", "--rmin",
            "0.8", "--rmax", "2.6", "--trials", "2", "--gauge-tol", "1e-6",
        ])
        .arg("--json")
        .arg(&json)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains("\"magnetic_report\""));
    assert!(text.contains("\"operator\": \"magnetic_massless\""));
    assert!(csv_rows(&csv) == 3);
}

fn csv_rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn verify_writes_trial_csv_with_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = bin()
        .args([
            "verify", "--ineq", "hardy_4.3", "--n", "2", "--points", "32", "--trials", "3",
            "--seed", "9",
        ])
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "trial,seed,quotient");
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,9,"), "first row: {first}");
    assert_eq!(text.lines().count(), 4);
}
