//! End-to-end tests of the binary: document schemas, golden output and the
//! exit-code contract.

use std::process::{Command, Output};

fn fraxform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraxform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_document_matches_golden_file() {
    let out = fraxform(&[
        "solve",
        "--alpha",
        "9/10",
        "--format",
        "json",
        "y^(2a) - 9*y = 50*E(-2*t^a); y(0)=1",
    ]);
    assert!(out.status.success());
    let got = stdout_json(&out);
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/solve_forced_decay.json")).unwrap();
    assert_eq!(got, golden);
}

#[test]
fn solve_emits_exact_atom_pairs() {
    let out = fraxform(&[
        "solve",
        "--alpha",
        "1",
        "y^(2a) - 4*y = 0; y(0)=3",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["atoms"], serde_json::json!([["3", "2"]]));
    assert_eq!(doc["checks"]["residual_exact_zero"], true);
    // classical order: the finite-difference residual is reported
    assert!(doc["checks"]["residual_numeric_alpha1"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn transform_forward_and_inverse() {
    let out = fraxform(&["transform", "--kind", "sine", "--alpha", "0.9", "E(-2*t^a)"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["result"], "(2*s)/(s^2+4)");
    assert_eq!(doc["checks"]["roundtrip_exact"], true);

    let out = fraxform(&[
        "transform",
        "--kind",
        "sine",
        "--inverse",
        "--alpha",
        "0.9",
        "(2*s)/(s^2+9)",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["result"], "E(-3*t^a)");
}

#[test]
fn transform_zero_expression() {
    let out = fraxform(&["transform", "--kind", "sine", "--alpha", "0.9", "0"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["result"], "0");
}

#[test]
fn eval_csv_schema() {
    let out = fraxform(&["eval", "--alpha", "1", "E(-2*t^a)", "--grid", "0,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines[1], "0,1.0000000000");
    assert_eq!(lines[2], "1,0.1353352832");
}

#[test]
fn eval_reports_per_row_failures_with_exit_4() {
    let out = fraxform(&["eval", "--alpha", "1", "E(-5*t^a)", "--grid", "0,100"]);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8(out.stdout).unwrap();
    // the good row is still emitted
    assert!(text.contains("0,1.0000000000"));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().lines().next().unwrap())
            .unwrap();
    assert_eq!(err["error"]["code"], 4);
}

#[test]
fn exit_code_contract() {
    // 2: parse error
    let out = fraxform(&["solve", "--alpha", "0.9", "y^(a) - y = 0; y(0)=1"]);
    assert_eq!(out.status.code(), Some(2));
    // 3: unsupported method (resonance)
    let out = fraxform(&[
        "solve",
        "--alpha",
        "0.9",
        "y^(2a) - 4*y = E(-2*t^a); y(0)=0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // 3: irrational inverse rate
    let out = fraxform(&[
        "transform",
        "--inverse",
        "--kind",
        "sine",
        "--alpha",
        "1",
        "(2*s)/(s^2+2)",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // 2: bad alpha
    let out = fraxform(&["eval", "--alpha", "3/2", "E(-1*t^a)", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // stderr diagnostics are machine-readable JSON
    let err: serde_json::Value =
        serde_json::from_slice(&fraxform(&["solve", "--alpha", "0.9", "nonsense"]).stderr)
            .unwrap();
    assert_eq!(err["error"]["code"], 2);
}

#[test]
fn verify_skips_formal_orders_with_exit_0() {
    let out = fraxform(&["verify", "convolution", "--alpha", "0.8"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["skipped"], true);
    assert_eq!(doc["cases"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_suites_pass_classically() {
    for suite in ["parseval", "example1", "roundtrip"] {
        let out = fraxform(&["verify", suite, "--alpha", "1", "--seed", "42"]);
        assert!(out.status.success(), "suite {suite}");
        let doc = stdout_json(&out);
        assert_eq!(doc["failed"], 0, "suite {suite}");
        assert!(doc["passed"].as_u64().unwrap() > 0, "suite {suite}");
    }
}

#[test]
fn table_lists_pairs() {
    let out = fraxform(&["table", "--rates", "1,3", "--format", "json"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["rows"][0]["sine"], "(2*s)/(s^2+1)");
    assert_eq!(doc["rows"][1]["cosine"], "(6)/(s^2+9)");
}

#[test]
fn max_terms_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_fraxform"))
        .args(["eval", "--alpha", "1", "E(-1*t^a)", "--grid", "30"])
        .env("FRAXFORM_MAX_TERMS", "16")
        .output()
        .unwrap();
    // 16 terms cannot converge at u = -30: truncation, exit 4
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_fraxform"))
        .args(["eval", "--alpha", "1", "E(-1*t^a)", "--grid", "30"])
        .env("FRAXFORM_MAX_TERMS", "bogus")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
