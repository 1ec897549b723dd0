use std::process::{Command, Output};

use serde_json::Value;

fn liegrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegrid")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn basis_documents() {
    for (n, len) in [("2", 4), ("3", 9)] {
        let out = liegrid(&["basis", "--n", n]);
        assert_eq!(out.status.code(), Some(0));
        let doc = json(&out);
        assert_eq!(doc["matrices"].as_array().unwrap().len(), len);
        assert_eq!(doc["labels"].as_array().unwrap().len(), len);
    }
}

#[test]
fn basis_rejects_n_one() {
    let out = liegrid(&["basis", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn verify_suites() {
    for args in [
        ["verify", "--n", "2", "--suite", "all"],
        ["verify", "--n", "3", "--suite", "lorentz"],
    ] {
        let out = liegrid(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["passed"], Value::Bool(true));
    }
}

#[test]
fn su3_transforms_records_expected_violation() {
    let out = liegrid(&["verify", "--n", "3", "--suite", "transforms"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let checks = doc["checks"].as_array().unwrap();
    let interval = checks.iter().find(|c| c["name"] == "boost.interval").unwrap();
    assert_eq!(interval["kind"], "expected_violation");
    assert!(interval["max_violation"].as_f64().unwrap() > 1e-3);
}

#[test]
fn identity_transform() {
    let out = liegrid(&["transform", "--n", "2", "--theta", "0,0,0", "--phi", "0,0,0", "--vector", "1,2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(numbers(&json(&out)["output"]), vec![1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn pi_rotation_flips_first_component() {
    let out = liegrid(&[
        "transform", "--n", "2", "--theta", "3.14159265,0,0", "--phi", "0,0,0", "--vector", "0,1,0,0",
    ]);
    let x = numbers(&json(&out)["output"]);
    for (got, want) in x.iter().zip([0.0, -1.0, 0.0, 0.0]) {
        assert!((got - want).abs() < 1e-7, "{x:?}");
    }
}

#[test]
fn boost_mixes_first_and_time_components() {
    let out = liegrid(&["transform", "--n", "2", "--theta", "0,0,0", "--phi", "1,0,0", "--vector", "1,0,0,0"]);
    let x = numbers(&json(&out)["output"]);
    let want = [1f64.cosh(), 0.0, 0.0, 1f64.sinh()];
    for (got, want) in x.iter().zip(want) {
        assert!((got - want).abs() < 1e-12, "{x:?}");
    }
    let out = liegrid(&[
        "transform", "--n", "2", "--theta", "0,0,0", "--phi", "1,0,0", "--vector", "1,0,0,0", "--eps", "-1",
    ]);
    let x = numbers(&json(&out)["output"]);
    assert!((x[3] + 1f64.sinh()).abs() < 1e-12, "{x:?}");
}

#[test]
fn momentum_single_solution() {
    let out = liegrid(&[
        "momentum", "--n", "2", "--A", "F", "--B", "A", "--C", "sym2(F)", "--D", "antisym2(A)", "--eps", "+1",
        "--block", "plus",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["plus"]["solspace_dim"], 1);
    assert!(doc["plus"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn momentum_empty_space_exits_one() {
    let out = liegrid(&[
        "momentum", "--n", "2", "--A", "F", "--B", "A", "--C", "F", "--D", "A", "--eps", "+1", "--block", "plus",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty solution space"));
}

#[test]
fn momentum_parse_error_exits_two() {
    let out = liegrid(&["momentum", "--n", "2", "--A", "F", "--B", "A", "--C", "sym2(F", "--eps", "+1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_fixture_fails_verification() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corrupted_su2_tensors.json");
    let out = liegrid(&["verify", "--n", "2", "--tensors", fixture]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], Value::Bool(false));
}

#[test]
fn missing_input_file_exits_two() {
    let out = liegrid(&["verify", "--n", "2", "--tensors", "/nonexistent/tensors.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exports_write_files() {
    let dir = tempfile::tempdir().unwrap();
    for what in ["basis", "tensors", "generators", "similarity", "csv"] {
        let path = dir.path().join(what);
        let path = path.to_str().unwrap();
        let out = liegrid(&["--output", path, "export", "--n", "2", "--what", what]);
        assert_eq!(out.status.code(), Some(0), "{what}");
        let text = std::fs::read_to_string(path).unwrap();
        if what == "csv" {
            assert!(text.starts_with("tensor,mu,nu,lambda,value"));
        } else {
            serde_json::from_str::<Value>(&text).unwrap();
        }
    }
}

#[test]
fn tolerance_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_liegrid"))
        .args(["verify", "--n", "2", "--suite", "tensors"])
        .env("LIEGRID_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerance"]["algebraic"].as_f64(), Some(1e-6));
}
