use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn srpsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srpsim")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    srpsim(args).status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    assert_eq!(code(&["simulate", "--scenario", "sc40-srp", "--seed", "1", "--rounds", "5000", "--out", p(&csv)]), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "round,alive,residual_energy_j,cumulative_packets");
    assert_eq!(lines.len(), 5001);
    assert!(!text.contains('\r'));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["sensing_range_m"], 40.0);
    assert_eq!(summary["seed"], 1);
    assert_eq!(summary["throughput_unit"], "packets");
    assert_eq!(summary["rounds_executed"], 5000);
}

#[test]
fn summary_replays_to_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let args = ["--override", "net.n=40", "--seed", "3", "--rounds", "4000"];
    let mut a = vec!["simulate", "--scenario", "sep", "--out", p(&first)];
    a.extend(args);
    assert_eq!(code(&a), 0);
    let summary = dir.path().join("a.summary.json");
    assert_eq!(code(&["simulate", "--config", p(&summary), "--out", p(&second)]), 0);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn stdout_summary_without_out() {
    let out = srpsim(&["simulate", "--scenario", "cl-sep", "--rounds", "100"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scenario"], "cl-sep");
    assert_eq!(v["total_packets"], 10_000);
}

#[test]
fn sweep_matches_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.csv");
    assert_eq!(
        code(&["sweep", "--scenario", "sc40-srp", "--values", "25,60", "--seeds", "1", "--rounds", "3000", "--out", p(&sweep)]),
        0
    );
    let out = srpsim(&["simulate", "--scenario", "sc40-srp", "--override", "trajectory.path.circle.radius=25", "--rounds", "3000"]);
    let single: Value = serde_json::from_slice(&out.stdout).unwrap();

    let mut rdr = csv::Reader::from_path(&sweep).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let packets: f64 = rows[0][col("total_packets_median")].parse().unwrap();
    assert_eq!(packets, single["total_packets"].as_f64().unwrap());
    assert_eq!(&rows[1][col("valid")], "false");
}

#[test]
fn compare_single_seed_has_zero_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    assert_eq!(
        code(&["compare", "--scenarios", "ss-srp,cc-srp", "--seeds", "1", "--rounds", "3000", "--out", p(&out)]),
        0
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cmp.report.json")).unwrap()).unwrap();
    for s in report["scenarios"].as_array().unwrap() {
        assert_eq!(s["total_packets"]["iqr"], 0.0);
    }
    assert!(dir.path().join("cmp.table.csv").exists());
    assert_eq!(code(&["validate", p(&out), p(&dir.path().join("cmp.table.csv")), p(&dir.path().join("cmp.report.json"))]), 0);
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(code(&["simulate", "--scenario", "nosuch"]), 2);
    assert_eq!(code(&["simulate"]), 2);
    assert_eq!(code(&["compare", "--scenarios", "sep", "--out", "/tmp/x.csv"]), 2);
    assert_eq!(code(&["simulate", "--scenario", "sc40-srp", "--override", "trajectory.path.circle.radius=60"]), 2);
    assert_eq!(code(&["simulate", "--scenario", "sep", "--override", "net.n=0"]), 2);
    assert_eq!(code(&["bogus-subcommand"]), 2);
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&["simulate", "--config", p(&missing)]), 3);
    let blocker = dir.path().join("plain-file");
    std::fs::write(&blocker, "x").unwrap();
    let bad_out = blocker.join("run.csv");
    assert_eq!(code(&["simulate", "--scenario", "sep", "--rounds", "10", "--out", p(&bad_out)]), 3);
    let nested = dir.path().join("new/sub/run.csv");
    assert_eq!(code(&["simulate", "--scenario", "sep", "--rounds", "10", "--out", p(&nested)]), 0);
    assert!(nested.exists());
}

#[test]
fn validate_rejects_corrupted_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    assert_eq!(code(&["simulate", "--scenario", "ss-srp", "--rounds", "50", "--out", p(&csv)]), 0);
    assert_eq!(code(&["validate", p(&csv)]), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines.swap(10, 20);
    std::fs::write(&csv, lines.join("\n") + "\n").unwrap();
    assert_eq!(code(&["validate", p(&csv)]), 4);
    let json = dir.path().join("broken.json");
    std::fs::write(&json, "{ not json").unwrap();
    assert_eq!(code(&["validate", p(&json)]), 4);
}

#[test]
fn presets_listing() {
    let out = srpsim(&["presets"]);
    let names = String::from_utf8(out.stdout).unwrap();
    assert_eq!(names.lines().count(), 7);
    let one = srpsim(&["presets", "CC_SRP"]);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["name"], "cc-srp");
}
