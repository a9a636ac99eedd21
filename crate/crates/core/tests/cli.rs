//! Exit codes and output shape of the command-line tool.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelkit")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn decide_exit_codes() {
    let out = run(&["decide", "rickart", "Z/6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);

    let out = run(&["decide", "rickart", "Z/4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"]["matrix"], serde_json::json!([[2]]));

    assert_eq!(run(&["decide", "rickart", "Z/("]).status.code(), Some(2));
    assert_eq!(run(&["decide", "bogus", "Z/2"]).status.code(), Some(2));
    assert_eq!(run(&["--budget", "1", "decide", "rickart", "Z/2 + Z/2"]).status.code(), Some(2));
}

#[test]
fn classify_prints_verdict() {
    let out = run(&["classify", "Z/6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["strongly_self_rickart"], true);
    assert_eq!(v["reason"], "squarefree-cyclic");
}

#[test]
fn verify_emits_json_lines_and_summary() {
    let out = run(&["verify", "--suite", "snf", "--suite", "c1-abgr", "--max-order", "8", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["suite_id"], "snf");
    assert_eq!(lines[1]["suite_id"], "c1-abgr");
    assert!(lines.iter().take(2).all(|l| l["passed"] == true));
    assert_eq!(lines[2]["passed"], 2);
}

#[test]
fn unknown_suite_is_an_error() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn explain_json() {
    let out = run(&["explain", "Z/4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["endomorphisms"], "4");
}
