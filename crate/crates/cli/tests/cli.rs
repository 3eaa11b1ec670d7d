use std::process::{Command, Output};

use serde_json::Value;

fn polycut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycut")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = polycut(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schemas/output.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    let value: Value = serde_json::from_str(&stdout(&args)).unwrap();
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} output violates the schema: {errors:?}\n{value:#}");
    value
}

#[test]
fn min_cuts_text() {
    let out = stdout(&["dissect", "min", "--shape", "l-tromino"]);
    assert!(out.contains("min_cuts=2\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit())).count(), 2);
    assert!(stdout(&["dissect", "min", "--shape", "domino"]).contains("min_cuts=1\n"));
    assert!(stdout(&["dissect", "min", "--shape", "row-7"]).contains("min_cuts=6\n"));
    assert!(stdout(&["dissect", "min", "--shape", "u-pentomino", "--model", "FULL_LINE"]).contains("min_cuts=3\n"));
    assert!(stdout(&["dissect", "min", "--shape", "square", "--model", "global"]).contains("min_cuts=2\n"));
    assert!(stdout(&["dissect", "min", "--shape", "#.#/###"]).contains("min_cuts=4\n"));
}

#[test]
fn shape_files() {
    let dir = tempfile::tempdir().unwrap();
    let ascii = dir.path().join("t.txt");
    std::fs::write(&ascii, "###\n.#.\n").unwrap();
    assert!(stdout(&["dissect", "min", "--shape", ascii.to_str().unwrap()]).contains("min_cuts=3\n"));
    let js = dir.path().join("t.json");
    std::fs::write(&js, r#"{"cells": [[0,0],[1,0],[1,1]]}"#).unwrap();
    assert!(stdout(&["dissect", "min", "--shape", js.to_str().unwrap()]).contains("min_cuts=2\n"));
}

#[test]
fn json_outputs_match_schema() {
    let v = json(&["dissect", "min", "--shape", "l-tromino"]);
    assert_eq!(v["min_cuts"], 2);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    let v = json(&["dissect", "greedy", "--shape", "u-pentomino"]);
    assert_eq!(v["cuts"], 4);
    let v = json(&["survey", "--nmax", "4"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1 + 2 + 6 + 19);
    json(&["monty", "exact"]);
    json(&["monty", "simulate", "--trials", "1000", "--seed", "3"]);
    json(&["birthday", "--n", "23"]);
    json(&["birthday", "--nmax", "5", "--trials", "200"]);
    assert_eq!(json(&["birthday", "--target", "0.5"])["threshold"]["exact"], 23);
    assert_eq!(json(&["hanoi", "--n", "3"])["count"], 7);
    assert_eq!(json(&["queens", "--n", "6"])["count"], 4);
    assert_eq!(json(&["knight", "--rows", "5", "--cols", "5"])["found"], true);
    assert_eq!(json(&["knight", "--rows", "3", "--cols", "3"])["found"], false);
    assert_eq!(json(&["domination", "--n", "4"])["k"], 2);
    assert_eq!(json(&["magic", "--order", "3"])["count"], 8);
}

#[test]
fn schema_rejects_malformed_output() {
    let bad = serde_json::json!({"command": "hanoi", "n": 1, "count": 1, "moves": ["0-2"]});
    assert!(!schema().is_valid(&bad));
    let bad = serde_json::json!({"command": "dissect-min", "shape": "#", "n": 1, "model": "DIAGONAL", "min_cuts": 0, "witness": []});
    assert!(!schema().is_valid(&bad));
}

#[test]
fn survey_csv_and_alias() {
    let csv = stdout(&["dissect", "survey", "--nmax", "3", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,shape_key,min_cuts,n_minus_1,matches"));
    assert_eq!(lines.count(), 1 + 2 + 6);
    assert_eq!(csv, stdout(&["survey", "--nmax", "3", "--format", "csv", "--jobs", "4"]));
    let text = stdout(&["survey", "--nmax", "5", "--model", "FULL_LINE"]);
    assert!(text.contains("flagged"), "{text}");
}

#[test]
fn birthday_outputs() {
    let out = stdout(&["birthday", "--n", "23", "--formula", "approx"]);
    assert_eq!(out, "n=23 approx=0.500477\n");
    let csv = stdout(&["birthday", "--nmax", "3", "--format", "csv"]);
    assert!(csv.starts_with("n,exact,approx,simulated\n1,0,0,\n"), "{csv}");
    assert_eq!(stdout(&["birthday", "--target", "0.5", "--formula", "exact"]), "exact threshold=23 target=0.5\n");
}

#[test]
fn hanoi_and_queens_text() {
    assert_eq!(stdout(&["hanoi", "--n", "1"]), "0→2\n");
    assert_eq!(stdout(&["hanoi", "--n", "2"]), "0→1\n0→2\n1→2\n");
    let q = stdout(&["queens", "--n", "8", "--jobs", "2"]);
    assert!(q.starts_with("count=92\n"));
    assert_eq!(q.lines().count(), 93);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["monty", "simulate", "--trials", "20000", "--seed", "42"];
    assert_eq!(stdout(&args), stdout(&args));
    let mut more = args.to_vec();
    more.extend(["--jobs", "3"]);
    assert_eq!(stdout(&args), stdout(&more));
    let args = ["birthday", "--nmax", "30", "--trials", "500", "--seed", "7", "--format", "csv"];
    assert_eq!(stdout(&args), stdout(&args));
    assert_ne!(stdout(&args), stdout(&["birthday", "--nmax", "30", "--trials", "500", "--seed", "8", "--format", "csv"]));
}

#[test]
fn exit_codes() {
    assert_eq!(polycut(&["dissect", "min"]).status.code(), Some(2));
    assert_eq!(polycut(&["dissect", "min", "--shape", "domino", "--model", "DIAGONAL"]).status.code(), Some(2));
    assert_eq!(polycut(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(polycut(&["queens", "--n", "4", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(polycut(&["birthday"]).status.code(), Some(2));
    let out = polycut(&["dissect", "min", "--shape", "#.#"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(polycut(&["dissect", "min", "--shape", "row-20"]).status.code(), Some(1));
    assert_eq!(polycut(&["hanoi", "--n", "40"]).status.code(), Some(1));
    assert_eq!(polycut(&["knight", "--rows", "4", "--cols", "4", "--start", "7,7"]).status.code(), Some(1));
}
