//! End-to-end checks of the CLI contract: invocation grammar, exit codes,
//! file emission, and byte-stability across equal seeds.

use std::path::PathBuf;
use std::process::Command;

fn radk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radk"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("radk-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn run_emits_csv_and_exits_zero_on_pass() {
    let out = tmp("h9.csv");
    let status = radk()
        .args(["run", "holmstedt9", "--seed", "4"])
        .args(["--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let body = std::fs::read_to_string(&out).unwrap();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment_id,t,sample_index,lhs,rhs,ratio"
    );
    let first = lines.next().unwrap();
    assert!(first.starts_with("holmstedt9,"));
    assert_eq!(first.split(',').count(), 6);
    std::fs::remove_file(&out).ok();
}

#[test]
fn equal_seeds_give_byte_identical_output() {
    let (a, b) = (tmp("det-a.csv"), tmp("det-b.csv"));
    for out in [&a, &b] {
        let status = radk()
            .args(["run", "khintchine", "--seed", "9"])
            .args(["--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
}

#[test]
fn json_output_parses_back() {
    let out = tmp("mont.json");
    let status = radk()
        .args(["run", "montgomery", "--seed", "2", "--format", "json"])
        .args(["--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["experiment_id"], "montgomery");
    assert_eq!(v["pass"], true);
    assert!(v["ratio_max"].as_f64().unwrap() <= 10.0);
    std::fs::remove_file(&out).ok();
}

#[test]
fn config_file_drives_the_run() {
    let cfg = tmp("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"experiment_id":"identity3","coefficient_family":{"explicit":[1.0,1.0]},"n":2,"samples":1,"t_grid":{"min":1.0,"max":1.0,"points":1}}"#,
    )
    .unwrap();
    let out = tmp("id3.csv");
    let status = radk()
        .args(["run", "identity3"])
        .args(["--config", cfg.to_str().unwrap()])
        .args(["--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let body = std::fs::read_to_string(&out).unwrap();
    assert_eq!(body.lines().count(), 2);
    assert!(body.lines().nth(1).unwrap().ends_with(",1"));
    std::fs::remove_file(&cfg).ok();
    std::fs::remove_file(&out).ok();
}

#[test]
fn invalid_config_exits_two() {
    let cfg = tmp("bad.json");
    std::fs::write(&cfg, r#"{"experiment_id":"khintchine","n":0}"#).unwrap();
    let output = radk()
        .args(["run", "khintchine"])
        .args(["--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("`n`"), "stderr should name the field: {err}");
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn unknown_experiment_exits_two() {
    let output = radk().args(["run", "nonsense"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn violated_bound_exits_one() {
    // An impossible tolerance forces a bound violation without touching the
    // engines: khintchine at p = 1 cannot have a ratio envelope inside
    // [0.99, 1.01].
    let cfg = tmp("strict.json");
    std::fs::write(
        &cfg,
        r#"{"experiment_id":"khintchine","n":6,"samples":20,"seed":1,"params":{"p":1.0},"tolerances":{"ratio_lo":0.99,"ratio_hi":1.01}}"#,
    )
    .unwrap();
    let out = tmp("strict.csv");
    let output = radk()
        .args(["run", "khintchine"])
        .args(["--config", cfg.to_str().unwrap()])
        .args(["--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    std::fs::remove_file(&cfg).ok();
    std::fs::remove_file(&out).ok();
}
