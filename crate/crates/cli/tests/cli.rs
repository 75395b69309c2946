//! End-to-end tests against the `gls` binary: exit codes, output formats,
//! and report determinism.

use std::io::Write;
use std::process::{Command, Output};

fn gls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_model(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("gls-test-{}-{name}.json", std::process::id()));
    let mut file = std::fs::File::create(&path).unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn prove_gls_reflection_exits_zero_with_sigma() {
    let out = gls(&["prove", "[]p -> p"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("provable (GLS)"));
    assert!(text.contains("sigma: {[]p}"));
    assert!(text.contains("(□L)"));
}

#[test]
fn prove_gl_reflection_exits_one_with_countermodel() {
    let out = gls(&["prove", "[]p -> p", "--logic", "gl"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("refuted (GL)"));
    assert!(text.contains("countermodel"));
}

#[test]
fn prove_syntax_error_exits_two_with_position() {
    let out = gls(&["prove", "[]("]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position 4"));
}

#[test]
fn prove_json_carries_a_checkable_proof() {
    let out = gls(&["prove", "[]([]p->p)->[]p", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["provable"], true);
    assert_eq!(value["logic"], "GLS");
    let proof = gls_core::render::proof_from_json(&value["proof"]).unwrap();
    assert!(gls_core::check_proof(&proof).is_valid());
    assert!(!proof.uses_cut());
}

#[test]
fn refuted_json_carries_the_chain_schema() {
    let out = gls(&["prove", "[]([]p -> p)", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["provable"], false);
    let cm = &value["countermodel"];
    assert!(cm["core"]["worlds"].is_array());
    assert!(cm["designated"].is_string());
    assert!(cm["tail_valuation"].is_array());
    // The embedded core parses back as a model.
    let model: gls_core::KripkeModel = serde_json::from_value(cm["core"].clone()).unwrap();
    assert!(model.is_gl_model());
}

#[test]
fn latex_format_emits_infer_macros() {
    let out = gls(&["prove", "[]p -> p", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r"\infer"));
    assert!(stdout(&out).contains(r"\Rrightarrow"));
}

#[test]
fn countermodel_command_renders_dot() {
    let out = gls(&["countermodel", "p -> []p", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("tail"));
}

#[test]
fn countermodel_command_on_theorem_reports_none() {
    let out = gls(&["countermodel", "[]p -> p"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no countermodel"));
}

#[test]
fn dot_format_for_a_theorem_is_an_error() {
    let out = gls(&["prove", "[]p -> p", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_model_evaluates_truth() {
    let path = temp_model(
        "chain",
        r#"{"worlds": ["a", "b"], "relation": [["a", "b"]], "valuation": {"b": ["p"]}}"#,
    );
    let out = gls(&["check-model", path.to_str().unwrap(), "a", "[]p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");
    let out = gls(&["check-model", path.to_str().unwrap(), "a", "p"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "false");
    std::fs::remove_file(path).ok();
}

#[test]
fn check_model_rejects_non_gl_frames() {
    let path = temp_model(
        "cycle",
        r#"{"worlds": ["a", "b"], "relation": [["a", "b"], ["b", "a"]], "valuation": {}}"#,
    );
    let out = gls(&["check-model", path.to_str().unwrap(), "a", "p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not transitive"));
    std::fs::remove_file(path).ok();
}

#[test]
fn check_model_rejects_unknown_world_and_bad_json() {
    let path = temp_model("one", r#"{"worlds": ["a"], "relation": [], "valuation": {}}"#);
    let out = gls(&["check-model", path.to_str().unwrap(), "zz", "p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown world"));
    std::fs::remove_file(path).ok();

    let path = temp_model("bad", "{this is not json");
    let out = gls(&["check-model", path.to_str().unwrap(), "a", "p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed model JSON"));
    std::fs::remove_file(path).ok();
}

#[test]
fn reduce_prints_the_reflection_implication() {
    let out = gls(&["reduce", "[]p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "([]p -> p) -> []p");
    let out = gls(&["reduce", "p -> q"]);
    assert_eq!(stdout(&out).trim(), "p -> q");
}

#[test]
fn crosscheck_passes_and_is_deterministic() {
    let args = [
        "crosscheck",
        "--count",
        "40",
        "--max-depth",
        "4",
        "--max-vars",
        "2",
        "--seed",
        "7",
        "--max-worlds",
        "2",
    ];
    let first = gls(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let text = stdout(&first);
    assert!(text.contains("reduction agreement: 40/40"));
    assert!(text.trim_end().ends_with("PASS"));
    let second = gls(&args);
    assert_eq!(stdout(&second), text, "report must be byte-identical");
}

#[test]
fn crosscheck_count_zero_is_an_empty_pass() {
    let out = gls(&["crosscheck", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reduction agreement: 0/0"));
}
