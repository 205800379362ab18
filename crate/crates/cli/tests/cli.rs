use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qannulus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qannulus")).args(args).env_remove("QA_LOG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bound_prints_the_envelope() {
    let o = qannulus(&["bound", "--r", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("C(r)=2.040004, envelope upper=2.040004"), "{}", stdout(&o));

    let o = qannulus(&["bound", "--r", "2"]);
    assert!(stdout(&o).contains("envelope upper=2.414214 (cited)"), "{}", stdout(&o));

    let o = qannulus(&["bound", "--r", "inf"]);
    assert_eq!(stdout(&o).lines().next(), Some("2"));
}

#[test]
fn invalid_radius_exits_with_two() {
    for cmd in ["bound", "verify-dilation", "check-estimate", "identity-check", "estimate-k"] {
        let o = qannulus(&[cmd, "--r", "0.5"]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stderr(&o).contains("r must exceed 1 or be inf"), "{cmd}: {}", stderr(&o));
    }
    let o = qannulus(&["sweep", "--r", "2,1", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r must exceed 1 or be inf"));
}

#[test]
fn search_on_the_cross_is_a_config_error() {
    let o = qannulus(&["estimate-k", "--r", "inf", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cross-demo"));
}

#[test]
fn cross_demo_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cross.json");
    let o = qannulus(&["cross-demo", "--eps", "1e-6", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ratio=1.999998"));
    let v = read_json(&json);
    assert!((v["results"]["ratio"].as_f64().unwrap() - 1.999998).abs() <= 1e-12);
}

#[test]
fn verify_dilation_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("dil.json");
    let csv = dir.path().join("dil.csv");
    let o = qannulus(&[
        "verify-dilation",
        "--r",
        "2",
        "--dim",
        "4",
        "--trials",
        "20",
        "--seed",
        "42",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&json);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["command", "config", "elapsed_ms", "findings", "results", "seed", "version"]);
    assert_eq!(v["command"], "verify-dilation");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["config"]["r"], 2.0);
    assert_eq!(v["results"]["passed"], 20);
    assert!(v["findings"].as_array().unwrap().is_empty());
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("index,seed,dim,item1,item2,item3,item4,item5,passed\n"));
    assert_eq!(table.lines().count(), 21);
}

#[test]
fn verify_dilation_on_the_cross() {
    let o = qannulus(&["verify-dilation", "--r", "inf", "--dim", "4", "--trials", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("passed=30"));
}

#[test]
fn property_violation_exits_with_one() {
    // A tolerance no floating-point residual can meet.
    let o = qannulus(&["identity-check", "--r", "2", "--trials", "5", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"kind\":\"identity_residual\""), "{}", stderr(&o));
}

#[test]
fn check_estimate_reports_constant() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("est.json");
    let o = qannulus(&["check-estimate", "--r", "inf", "--trials", "40", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = read_json(&json);
    assert_eq!(v["config"]["r"], "inf");
    assert_eq!(v["results"]["C_r"], 2.0);
    assert!(v["results"]["max_ratio"].as_f64().unwrap() <= 2.0 + 1e-8);
}

#[test]
fn identity_check_passes() {
    for r in ["1.5", "inf"] {
        let o = qannulus(&["identity-check", "--r", r, "--trials", "25"]);
        assert_eq!(o.status.code(), Some(0), "{r}: {}", stderr(&o));
    }
}

#[test]
fn sweep_csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = qannulus(&["sweep", "--r", "1.5,2,3", "--budget", "1500", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("r,C_r,best_ratio,gap,dim,deg,budget,seed"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!((row[3] - (row[1] - row[2])).abs() < 1e-12);
        assert!(row[2] >= 1.0 && row[2] <= row[1]);
    }
}

#[test]
fn estimate_k_results_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("k{i}.json"))).collect();
    let witness = dir.path().join("witness.json");
    for p in &paths {
        let o = qannulus(&[
            "estimate-k",
            "--r",
            "3",
            "--dim",
            "3",
            "--deg",
            "6",
            "--budget",
            "3000",
            "--seed",
            "7",
            "--json",
            p.to_str().unwrap(),
            "--out",
            witness.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (a, b) = (read_json(&paths[0]), read_json(&paths[1]));
    assert_eq!(serde_json::to_string(&a["results"]).unwrap(), serde_json::to_string(&b["results"]).unwrap());
    let w = read_json(&witness);
    assert_eq!(w["model"], "annulus");
    assert_eq!(w["ratio"], a["results"]["outcome"]["best"]["ratio"]);
}
