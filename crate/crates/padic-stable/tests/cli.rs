//! End-to-end CLI checks: commands, artifacts, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_padic-stable")
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    std::fs::write(
        &path,
        "p = 2\nalpha = 1.0\nlevels = [[1, 1], [1, 2]]\nseed = 7\n",
    )
    .unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn verify_passes_and_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "verify",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
    assert!(out_dir.join("verify.csv").exists());
    assert!(out_dir.join("manifest.json").exists());
}

#[test]
fn verify_json_format() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "verify",
        "--format",
        "json",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(out_dir.join("verify.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn missing_config_is_exit_two() {
    let out = run(&["--config", "/no/such/file.toml", "--command", "verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_is_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.toml");
    std::fs::write(&path, "p = 6\nalpha = 1.0\nlevels = [[1, 1]]\n").unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "--command", "verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_samples_is_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "simulate",
        "--samples",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    let out = run(&["--command", "verify"]); // missing --config
    assert_eq!(out.status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "sing", // unknown command
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_paths_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "simulate",
        "--level",
        "2",
        "--samples",
        "50",
        "--horizon",
        "2.0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let paths = std::fs::read_to_string(out_dir.join("paths.txt")).unwrap();
    assert_eq!(paths.lines().filter(|l| l.starts_with('#')).count(), 50);
    let stats = std::fs::read_to_string(out_dir.join("exit_stats.csv")).unwrap();
    assert!(stats.starts_with("level,depth,"));
    assert_eq!(stats.lines().count(), 2); // header + depth 1
}

#[test]
fn analyze_writes_dimension_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "analyze",
        "--level",
        "2",
        "--samples",
        "40",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(out_dir.join("dimension.csv")).unwrap();
    assert!(table.starts_with("level,b_n,"));
    assert_eq!(table.lines().count(), 3); // header + levels 1, 2
}

#[test]
fn report_bundles_everything() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "report",
        "--samples",
        "200",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for file in [
        "manifest.json",
        "verify.csv",
        "paths.txt",
        "exit_stats.csv",
        "dimension.csv",
        "levy.csv",
    ] {
        assert!(out_dir.join(file).exists(), "{file} missing from report bundle");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "report");
    assert_eq!(manifest["seed"], 7);
}

#[test]
fn alpha_and_seed_overrides_apply() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "verify",
        "--alpha",
        "2.0",
        "--seed",
        "99",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["alpha"], 2.0);
    assert_eq!(manifest["seed"], 99);
}
