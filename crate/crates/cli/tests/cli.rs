use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("primad-bco-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_primad-bco"));
    c.env_remove("PRIMAD_BCO_TIMEOUT_MS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn conformant() -> String {
    fixture("conformant.json").display().to_string()
}

#[test]
fn analyze_conformant_succeeds() {
    let o = run(&["analyze", &conformant()]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["summary"]["counts"]["error"], json!(0));
}

#[test]
fn malformed_json_is_unparseable() {
    let o = run_stdin(&["analyze", "-"], "{\"object_id\": ");
    assert_eq!(code(&o), 2);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.get("parse_error").is_some());
}

#[test]
fn missing_file_is_unparseable() {
    assert_eq!(code(&run(&["lint", "/definitely/not/here.json"])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["analyze", "--bogus", &conformant()])), 3);
    assert_eq!(code(&run(&["classify", "--changed", "weather"])), 3);
    assert_eq!(code(&run(&[])), 3);
    assert_eq!(code(&run(&["map"])), 3);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn missing_domain_fails_validation() {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(conformant()).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("io");
    let o = run_stdin(&["validate", "-", "--format", "text"], &v.to_string());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("ERROR"));
}

#[test]
fn classify_labels() {
    let label = |changed: &str| {
        let o = run(&["classify", "--changed", changed]);
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert!(label("").starts_with("label: Repeat\n"));
    assert!(label("method,platform").starts_with("label: Ratify\n"));
    let review = label("actor");
    assert!(review.starts_with("label: Review\n"));
    assert!(review.contains("Independent Verification"));

    let o = run(&["classify", "--changed", "Platform", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["core_label"], json!("Port"));
}

#[test]
fn mapping_table_has_four_columns() {
    let o = run(&["map", "--table"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().count() > 50);
    assert!(text.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn stdin_matches_file_input() {
    let text = std::fs::read_to_string(conformant()).unwrap();
    let from_file = run(&["inventory", &conformant()]);
    let from_stdin = run_stdin(&["inventory", "-"], &text);
    assert_eq!(stdout(&from_file), stdout(&from_stdin));
}

#[test]
fn reconfigure_adds_reproduction() {
    let rec = scratch("repro.json");
    std::fs::write(
        &rec,
        json!({"date": "2024-03-01T12:00:00Z", "result": "partial", "obstacles": [], "coverage": 0.5}).to_string(),
    )
    .unwrap();
    let out = scratch("reconfigured.json");
    let o = run(&[
        "reconfigure",
        &conformant(),
        "--add-repro",
        rec.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = run(&["validate", out.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    let report: Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(report["etag"]["status"], json!("match"));
}

#[test]
fn timeout_is_read_from_environment() {
    let bad = bin()
        .args(["lint", &conformant()])
        .env("PRIMAD_BCO_TIMEOUT_MS", "soon")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 3);
    let good = bin()
        .args(["lint", &conformant()])
        .env("PRIMAD_BCO_TIMEOUT_MS", "250")
        .output()
        .unwrap();
    assert_eq!(code(&good), 0);
}
