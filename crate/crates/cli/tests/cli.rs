use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn qpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpkit"))
        .args(args)
        .env_remove("QPKIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let out = qpkit(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (doc, out.status.code().unwrap_or(-1))
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qpkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn veronese_surface_qp() {
    let path = corpus("veronese2.json");
    let (doc, code) = run_json(&["qp", path.to_str().unwrap(), "--trials", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["qp"], json!(3));
    assert_eq!(doc["result"]["kappa"], json!([6, 3, 1, 0]));
    assert_eq!(doc["command"], json!("qp"));
    assert_eq!(doc["seed"], json!(7));
}

#[test]
fn petersen_upper_bounds() {
    let path = corpus("petersen.json");
    let (doc, code) = run_json(&["bounds", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["uppers"], json!([6, 8, 5]));
}

#[test]
fn twisted_cubic_strand() {
    let path = corpus("twisted_cubic.json");
    let (doc, code) = run_json(&["strand", path.to_str().unwrap(), "--pmax", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["k_p1"], json!([3, 2, 0]));
    assert_eq!(doc["result"]["ell"], json!(2));
}

#[test]
fn output_is_byte_identical() {
    let path = corpus("pentagon.json");
    let args = ["report", path.to_str().unwrap(), "--seed", "11"];
    let a = qpkit(&args);
    let b = qpkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn digest_ignores_field_order() {
    let a = write_temp("a.json", r#"{"type":"graph","vertices":4,"edges":[[0,1],[2,3]]}"#);
    let b = write_temp("b.json", r#"{"edges":[[3,2],[1,0]],"vertices":4,"type":"graph"}"#);
    let (da, _) = run_json(&["quadrics", a.to_str().unwrap()]);
    let (db, _) = run_json(&["quadrics", b.to_str().unwrap()]);
    assert!(da["input_digest"].is_string());
    assert_eq!(da["input_digest"], db["input_digest"]);
}

#[test]
fn exit_codes() {
    let bad = write_temp("loop.json", r#"{"type":"graph","vertices":3,"edges":[[1,1]]}"#);
    let out = qpkit(&["qp", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("loop"));

    let out = qpkit(&["qp", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(1));

    // a single point cannot kill every quadric of the Petersen model
    let path = corpus("petersen.json");
    let (doc, code) = run_json(&["qp", path.to_str().unwrap(), "--max-gamma", "1"]);
    assert_eq!(code, 2);
    assert_eq!(doc["result"]["status"], json!("inconclusive"));
}

#[test]
fn budget_env_overrides_flag() {
    let path = corpus("petersen.json");
    let out = Command::new(env!("CARGO_BIN_EXE_qpkit"))
        .args(["strand", path.to_str().unwrap(), "--budget", "100000000"])
        .env("QPKIT_BUDGET", "10")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["truncated"], json!(true));
}

#[test]
fn table_format() {
    let path = corpus("twisted_cubic.json");
    let out = qpkit(&["strand", path.to_str().unwrap(), "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.k_p1") && l.ends_with("[3, 2, 0]")), "{text}");
}

#[test]
fn selftest_passes() {
    let (doc, code) = run_json(&["selftest"]);
    assert_eq!(code, 0, "{doc:#}");
    assert_eq!(doc["result"]["failed"], json!(0));
}
