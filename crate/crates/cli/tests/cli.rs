use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_leibniz-super"));
    c.env_remove("LEIBNIZ_SUPER_LOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const A5: &str = r#"{"gamma":"1","beta":["1/2","0"],"beta_last":"0"}"#;

fn build_a5() -> String {
    let o = run(&["build", "--family", "A", "--n", "5", "--params", A5]);
    assert_eq!(code(&o), 0);
    stdout(&o)
}

#[test]
fn build_emits_family_member() {
    let v: Value = serde_json::from_str(&build_a5()).unwrap();
    assert_eq!(v["even_dim"], 5);
    assert_eq!(v["odd_dim"], 6);
    assert_eq!(v["basis"].as_array().unwrap().len(), 11);
    assert_eq!(v["scalar"], "rational");
}

#[test]
fn build_model_chain() {
    let v = json(&run(&["build", "--family", "model1", "--n", "4"]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
    assert_eq!(v["odd_dim"], 0);
}

#[test]
fn build_rejects_small_n() {
    let o = run(&["build", "--family", "A", "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n below minimum"));
}

#[test]
fn check_passes_on_family_member() {
    let o = run_stdin(&["check", "-"], &build_a5());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn check_reports_tampered_triples() {
    let mut v: Value = serde_json::from_str(&build_a5()).unwrap();
    for b in v["brackets"].as_array_mut().unwrap() {
        if b["l"] == 0 && b["r"] == 5 {
            b["out"][0]["v"] = "2".into();
        }
    }
    let o = run_stdin(&["check", "--json", "-"], &v.to_string());
    assert_eq!(code(&o), 1);
    let report = json(&o);
    let violations = report["leibniz"]["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|x| x["labels"] == serde_json::json!(["x1", "x1", "y1"])));
}

#[test]
fn malformed_input_is_a_usage_error() {
    assert_eq!(code(&run_stdin(&["check", "-"], "{bad")), 2);
    assert_eq!(code(&run(&["check", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn invariants_of_a_family_member() {
    let o = run_stdin(&["invariants", "--json", "-"], &build_a5());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["nilindex"], 11);
}

#[test]
fn canon_needs_complex_for_missing_roots() {
    let p = r#"{"gamma":"1","beta":["1/2","2"],"beta_last":"5"}"#;
    let o = run(&["canon", "--family", "A", "--n", "5", "--params", p]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--scalar complex"));
    let o = run(&[
        "canon", "--family", "A", "--n", "5", "--scalar", "complex", "--json", "--params", p,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["descriptor"]["case"], "1.2");
}

#[test]
fn canon_exact_generic_case() {
    let p = r#"{"gamma":"9","beta":["3","0"],"beta_last":"0"}"#;
    let o = run(&[
        "canon", "--family", "A", "--n", "5", "--json", "--params", p,
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["representative"]["gamma"], "1");
    assert_eq!(v["representative"]["beta"], serde_json::json!(["1", "0"]));
}

#[test]
fn iso_exit_codes_and_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let wpath = dir.path().join("w.json");
    let left = r#"{"gamma":"9","beta":["3","0"],"beta_last":"0"}"#;
    let right = r#"{"gamma":"1","beta":["1","0"],"beta_last":"0"}"#;
    let o = run(&[
        "iso",
        "--family",
        "A",
        "--n",
        "5",
        "--left",
        left,
        "--right",
        right,
        "--witness",
        wpath.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&wpath).unwrap()).unwrap();
    assert_eq!(w["b"], "1/3");

    let zero = r#"{"gamma":"0","beta":["0","0"],"beta_last":"0"}"#;
    let o = run(&[
        "iso", "--family", "A", "--n", "5", "--left", left, "--right", zero,
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn enumerate_counts_groups() {
    for (family, n, groups) in [("A", "5", 5), ("A", "6", 3), ("B", "4", 2)] {
        let v = json(&run(&["enumerate", "--family", family, "--n", n]));
        assert_eq!(v["groups"].as_array().unwrap().len(), groups, "{family}{n}");
    }
}

#[test]
fn verify_classification_passes() {
    let o = run(&[
        "verify-classification",
        "--family",
        "A",
        "--n",
        "5",
        "--samples",
        "25",
        "--seed",
        "0",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_classification_catches_injected_bug() {
    let o = run(&[
        "verify-classification",
        "--family",
        "B",
        "--n",
        "4",
        "--samples",
        "3",
        "--inject-bug",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify-classification",
        "--n",
        "3..4",
        "--samples",
        "4",
        "--seed",
        "7",
        "--json",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("enum.json");
    let o = run(&[
        "enumerate",
        "--family",
        "B",
        "--n",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["family"], "B");
}
