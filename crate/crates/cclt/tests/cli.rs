use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cclt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cclt")).args(args).env_remove("CCLT_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bound_on_two_by_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.csv", "1,-1\n-1,1\n");
    let v = json(&cclt(&["bound", "--input", &f]));
    assert_eq!(v["schema"], 1);
    assert!((v["report"]["bound"].as_f64().unwrap() - 63.36).abs() < 1e-10);
    assert!((v["delta"]["delta"].as_f64().unwrap() - 0.341345).abs() < 1e-6);
    assert_eq!(v["delta"]["method"], "exact");
}

#[test]
fn json_input_matches_csv() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "a.csv", "0.5,1,2\n3,-1,0\n1,1,4\n");
    let j = write(&dir, "a.json", r#"{"a": [[0.5, 1, 2], [3, -1, 0], [1, 1, 4]]}"#);
    let a = json(&cclt(&["bound", "--input", &c]));
    let b = json(&cclt(&["bound", "--input", &j]));
    assert_eq!(a, b);
    let forced = json(&cclt(&["bound", "--input", &c, "--format", "csv"]));
    assert_eq!(a, forced);
}

#[test]
fn malformed_csv_names_row() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.csv", "1,2,3\n4,oops,6\n7,8,9\n");
    let out = cclt(&["bound", "--input", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 2"), "{}", stderr(&out));
    let ragged = write(&dir, "ragged.csv", "1,2\n3\n");
    assert!(stderr(&cclt(&["exact", "--input", &ragged])).contains("row 2"));
}

#[test]
fn degenerate_matrix_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c.csv", "2,2,2\n2,2,2\n2,2,2\n");
    let out = cclt(&["bound", "--input", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn sample_command() {
    let v = json(&cclt(&["sample", "--values", "1,2,3,4", "--m-draw", "2"]));
    assert!((v["sigma2"].as_f64().unwrap() - 1.666667).abs() < 1e-6);
    let generic = v["report"]["bound"].as_f64().unwrap();
    assert!((v["sampling_bound"].as_f64().unwrap() - generic).abs() <= 1e-10 * generic);

    let two = json(&cclt(&["sample", "--values", "0,1", "--m-draw", "1"]));
    assert_eq!(two["delta"]["atoms_count"], 2);
    assert!(two["report"]["delta_exact"].is_number());

    let full = cclt(&["sample", "--values", "1,2,3", "--m-draw", "3"]);
    assert_eq!(full.status.code(), Some(2));
    assert!(stderr(&full).contains("degenerate"));
    assert_eq!(cclt(&["sample", "--values", "1,2,3", "--m-draw", "4"]).status.code(), Some(2));
    let neg = json(&cclt(&["sample", "--values", "-1,0.5,2", "--m-draw", "1"]));
    assert_eq!(neg["values"][0], -1.0);
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "m.csv",
        "0.3,1,2,0,1,5,2\n1,1,0,2,3,1,2\n4,0,1,1,0,2,-1\n2,2,2,0,1,0,1\n0,1,3,1,1,2,2\n1,0,2,3,0,1,1\n2,1,0,1,4,0,0\n",
    );
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = out.to_str().unwrap();
        assert!(cclt(&["exact", "--input", &f, "--atoms", "--threads", threads, "--output", o]).status.success());
        fs::read(out).unwrap()
    };
    let a = run("a.json", "1");
    assert_eq!(a, run("b.json", "1"));
    assert_eq!(a, run("c.json", "4"));

    let env_out = Command::new(env!("CARGO_BIN_EXE_cclt"))
        .args(["exact", "--input", &f, "--atoms"])
        .env("CCLT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env_out.stdout, a);

    let mc =
        |seed: &str| cclt(&["exact", "--input", &f, "--monte-carlo", "--mc-samples", "20000", "--seed", seed]).stdout;
    assert_eq!(mc("5"), mc("5"));
    assert_ne!(mc("5"), mc("6"));
}

#[test]
fn enumeration_cap_points_to_monte_carlo() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.csv", "1,0,0,0\n0,2,0,0\n0,0,3,0\n0,0,0,5\n");
    let out = cclt(&["exact", "--input", &f, "--enum-cap", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Monte Carlo"));
    let v = json(&cclt(&["bound", "--input", &f, "--enum-cap", "3", "--mc-samples", "20000"]));
    assert_eq!(v["delta"]["method"], "monte-carlo");
    assert!(v["report"]["delta_exact"].is_null());
}

#[test]
fn charfn_grid() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.csv", "1,-1\n-1,1\n");
    let v = json(&cclt(&["charfn", "--input", &f, "--t-grid", "0:1:5"]));
    let evals = v["evaluations"].as_array().unwrap();
    assert_eq!(evals.len(), 5);
    for e in evals {
        let t = e["t"].as_f64().unwrap();
        assert!((e["phi"][0].as_f64().unwrap() - (2.0 * t).cos()).abs() < 1e-14);
        assert!((e["modulus_bound"].as_f64().unwrap() - (2.0 * t).cos().abs()).abs() < 1e-14);
    }
    assert_eq!(cclt(&["charfn", "--input", &f, "--t-grid", "0:1"]).status.code(), Some(2));
}

#[test]
fn constants_with_overrides() {
    let v = json(&cclt(&["constants"]));
    assert!(v["c1"].as_f64().unwrap() <= 15.84);
    assert!(v["c2"].as_f64().unwrap() <= 0.65);
    assert!((v["v_w"].as_f64().unwrap() - 5.329260).abs() < 1e-5);
    let other = json(&cclt(&["constants", "--w", "0.5"]));
    assert_ne!(v["c1"], other["c1"]);
    let bad = cclt(&["constants", "--c4", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("C4"));
}

#[test]
fn verify_suites() {
    let v = json(&cclt(&["verify", "--suite", "constants"]));
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(json(&cclt(&["verify", "--suite", "identity"]))["passed"], true);
    let unknown = cclt(&["verify", "--suite", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("unknown suite"));
}

#[test]
fn identity_command() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "y.json",
        r#"{"re": [[0.1, -0.4, 0.3], [0.2, 0.0, -0.5], [0.6, 0.1, 0.2]], "im": [[0.3, 0.2, -0.1], [-0.2, 0.5, 0.0], [0.1, -0.3, 0.4]]}"#,
    );
    let v = json(&cclt(&["identity", "--input", &f]));
    assert!(v["identity"]["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["swap"].as_array().unwrap().len(), 3);
    let b1 = &v["beta_pair"];
    let b2 = &v["beta_quadruple"];
    assert!((b1[0].as_f64().unwrap() - b2[0].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn missing_input_and_bad_config() {
    let out = cclt(&["bound"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--input"));
    let missing = cclt(&["bound", "--input", Path::new("/nonexistent/x.csv").to_str().unwrap()]);
    assert!(stderr(&missing).contains("cannot read"));
    assert_eq!(cclt(&["constants", "--mc-samples", "10"]).status.code(), Some(2));
    assert_eq!(cclt(&["constants", "--quad-tol", "0"]).status.code(), Some(2));
}
