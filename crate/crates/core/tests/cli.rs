use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;
use twistjet::cli::run;

fn spec_file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn args(cmd: &str, input: &Path, extra: &[&str]) -> Vec<String> {
    let mut v = vec!["twistjet".to_string(), cmd.to_string(), "--input".into(), input.display().to_string()];
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).unwrap()
}

#[test]
fn jet_lists_three_generators() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(&dir, "sq.json", r#"{"m": 1, "variables": ["x"], "relations": ["x^2"], "exponents": [0]}"#);
    let out = run(args("jet", &f, &["--max-weight", "2"]));
    assert_eq!(out.status, 0, "{}", out.stderr);
    let v = json(&out.stdout);
    assert_eq!(v["command"], "jet");
    let gens: Vec<&str> = v["results"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["poly"].as_str().unwrap())
        .collect();
    assert_eq!(gens, vec!["x[0]^2", "2*x[0]*x[-1]", "2*x[0]*x[-2] + x[-1]^2"]);
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn check_twisted_passes() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(&dir, "sq.json", r#"{"m": 2, "variables": ["x"], "relations": ["x^2"], "exponents": [1]}"#);
    let out = run(args("check-twisted", &f, &["--max-weight", "4", "--seed", "7"]));
    assert_eq!(out.status, 0, "{}", out.stdout);
    let v = json(&out.stdout);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn coinvariants_of_parabola() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(
        &dir,
        "par.json",
        r#"{"m": 2, "variables": ["x1", "x2"], "relations": ["x1^2 - x2"], "exponents": [1, 0]}"#,
    );
    let out = run(args("coinvariants", &f, &["--max-weight", "2", "--max-degree", "2"]));
    assert_eq!(out.status, 0, "{}", out.stdout);
    assert_eq!(json(&out.stdout)["results"]["total_dimension"], 1);

    // too few sections leaves positive-weight classes alive
    let out = run(args("coinvariants", &f, &["--max-weight", "2", "--max-degree", "2", "--window", "0"]));
    assert_eq!(out.status, 1);
}

#[test]
fn other_commands_succeed() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(
        &dir,
        "plane.json",
        r#"{"m": 3, "variables": ["a", "b"], "relations": ["a*b"], "exponents": [1, 2]}"#,
    );
    for (cmd, extra) in [
        ("twisted-jet", vec!["--max-weight", "5/3"]),
        ("fixed-points", vec![]),
        ("check-va", vec!["--window", "4", "--max-index", "2"]),
        ("check-quasiconf", vec!["--max-weight", "4", "--max-index", "3"]),
    ] {
        let out = run(args(cmd, &f, &extra));
        assert_eq!(out.status, 0, "{cmd}: {}{}", out.stdout, out.stderr);
    }
    let v = json(&run(args("fixed-points", &f, &[])).stdout);
    assert_eq!(v["results"]["variables"].as_array().unwrap().len(), 0);
    assert_eq!(v["results"]["relations"].as_array().unwrap().len(), 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(run(args("jet", &missing, &[])).status, 2);

    let bad = spec_file(&dir, "bad.json", r#"{"m": 1, "variables": ["x"], "relations": ["x + "]}"#);
    let out = run(args("jet", &bad, &[]));
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("line 1, column 5"), "{}", out.stderr);

    let unknown = spec_file(&dir, "unk.json", r#"{"m": 1, "variables": ["x"], "relations": ["y"]}"#);
    assert_eq!(run(args("jet", &unknown, &[])).status, 2);

    let moved = spec_file(&dir, "np.json", r#"{"m": 2, "variables": ["x1", "x2"], "relations": ["x1^2 - x2"], "exponents": [0, 1]}"#);
    assert_eq!(run(args("twisted-jet", &moved, &[])).status, 2);

    let ok = spec_file(&dir, "ok.json", r#"{"m": 1, "variables": ["x"], "relations": []}"#);
    assert_eq!(run(args("bogus", &ok, &[])).status, 2);
    assert_eq!(run(args("jet", &ok, &["--max-weight", "1/2"])).status, 2);
    assert_eq!(run(args("jet", &ok, &["--format", "xml"])).status, 2);
}

#[test]
fn json_and_text_agree() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(&dir, "plane.json", r#"{"m": 2, "variables": ["x1", "x2"], "relations": [], "exponents": [1, 0]}"#);
    let j = json(&run(args("coinvariants", &f, &["--max-weight", "2", "--max-degree", "3"])).stdout);
    let t = run(args("coinvariants", &f, &["--max-weight", "2", "--max-degree", "3", "--format", "text"])).stdout;
    for entry in j["results"]["dims"].as_array().unwrap() {
        let line = format!(
            "- degree={}, dim={}, weight={}",
            entry["degree"],
            entry["dim"],
            entry["weight"].as_str().unwrap()
        );
        assert!(t.contains(&line), "missing {line}");
    }
    assert!(t.contains(&format!("total_dimension: {}", j["results"]["total_dimension"])));
}

#[test]
fn seeded_runs_are_identical() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(&dir, "c.json", r#"{"m": 1, "variables": ["x1", "x2"], "relations": ["x1^3 - x2^2"]}"#);
    let a = run(args("check-va", &f, &["--window", "4", "--max-index", "1", "--seed", "5"]));
    let b = run(args("check-va", &f, &["--window", "4", "--max-index", "1", "--seed", "5"]));
    let c = run(args("check-va", &f, &["--window", "4", "--max-index", "1", "--seed", "6"]));
    assert_eq!(a, b);
    assert_ne!(json(&a.stdout)["results"]["samples"], json(&c.stdout)["results"]["samples"]);
}

#[test]
fn binary_exit_status() {
    let dir = TempDir::new().unwrap();
    let f = spec_file(&dir, "sq.json", r#"{"m": 1, "variables": ["x"], "relations": ["x^2"]}"#);
    let bin = env!("CARGO_BIN_EXE_twistjet");
    let ok = Command::new(bin).args(["jet", "--input"]).arg(&f).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["results"]["generators"].as_array().unwrap().len(), 5);
    let bad = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
