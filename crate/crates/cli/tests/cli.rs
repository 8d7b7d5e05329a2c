use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn aqh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqh")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aqh-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/lie")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn verify_rejects_n1() {
    let out = aqh(&["verify", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_n2_passes_and_is_deterministic() {
    let a = aqh(&["verify", "--n", "2", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let b = aqh(&["verify", "--n", "2", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 50);
    for c in checks.iter().filter(|c| c["kind"] == "identity") {
        assert_eq!(c["passed"], true, "{c}");
    }
}

#[test]
fn verify_n3_reports_the_census() {
    let out = aqh(&["verify", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("traces (28.0000, 128.0000, 12.0000, 56.0000, 256.0000, 24.0000) sum 504.0000"), "{text}");
    assert!(text.contains("0 identity failures"));
}

#[test]
fn tight_tolerance_fails_with_exit_1() {
    let out = aqh(&["verify", "--n", "2", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dims_n3() {
    let v = json(&aqh(&["dims", "--n", "3", "--format", "json"]));
    let dims: Vec<u64> = v["components"].as_array().unwrap().iter().map(|c| c["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![28, 128, 12, 56, 256, 24]);
    assert_eq!(v["w_dimension"], 504);
}

#[test]
fn inject_then_classify() {
    for (label, class) in [("KH", "KH"), ("EH", "EH"), ("ES3H", "ES3H"), ("KS3H", "KS3H")] {
        let path = scratch(&format!("{label}.json"));
        let p = path.to_str().unwrap();
        assert!(aqh(&["inject", "--component", label, "--n", "2", "--seed", "5", "--out", p]).status.success());
        let v = json(&aqh(&["classify", "--input", p, "--format", "json"]));
        assert_eq!(v["class"], class);
        if label == "EH" {
            assert!(v["aliases"].as_array().unwrap().iter().any(|a| a == "l.c.q.K."));
        }
    }
}

#[test]
fn inject_is_deterministic() {
    let a = aqh(&["inject", "--component", "KH", "--n", "3", "--seed", "11"]);
    let b = aqh(&["inject", "--component", "KH", "--n", "3", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn inject_vanishing_component_in_dimension_eight() {
    for label in ["L3EH", "L3ES3H"] {
        let out = aqh(&["inject", "--component", label, "--n", "2"]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("identically zero in dimension 8"));
    }
}

#[test]
fn zero_tensor_and_abelian_algebra_are_qk() {
    let zero = scratch("zero.json");
    fs::write(&zero, r#"{"n": 2, "degree": 4, "coeffs": {}}"#).unwrap();
    let v = json(&aqh(&["classify", "--input", zero.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["class"], "QK");

    let abelian = scratch("abelian.json");
    fs::write(&abelian, r#"{"n": 2, "brackets": [], "structure": "standard"}"#).unwrap();
    let out = aqh(&["classify", "--input", abelian.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["class"], "QK");
}

#[test]
fn malformed_input_is_exit_2() {
    let bad = scratch("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(aqh(&["classify", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = scratch("missing.json");
    assert_eq!(aqh(&["classify", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
    let jacobi = scratch("jacobi.json");
    fs::write(&jacobi, r#"{"n": 2, "brackets": [[0, 1, 2, 1.0], [2, 3, 0, 1.0]]}"#).unwrap();
    assert_eq!(aqh(&["classify", "--input", jacobi.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tensor_outside_w_is_rejected() {
    let path = scratch("outside.json");
    fs::write(&path, r#"{"n": 2, "degree": 4, "coeffs": {"0,1,2,3,4": 1.0}}"#).unwrap();
    let out = aqh(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in the intrinsic torsion space"));
}

#[test]
fn liealg_reports_fixture_and_searches() {
    let out = aqh(&["liealg", "--input", &fixture("n2_05.json"), "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["class"], "E(H+S3H)+KH");

    let dir = scratch("search");
    let out = aqh(&["liealg", "--search", "40", "--n", "2", "--out", dir.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let classes = json(&out)["classes"].as_array().unwrap().len();
    assert!(classes >= 1);
    assert_eq!(fs::read_dir(&dir).unwrap().count(), classes);
}
