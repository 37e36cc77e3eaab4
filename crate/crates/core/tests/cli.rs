use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_diffcoh")).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn example(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn snf_of_a_diagonal_matrix() {
    let (code, v) = run(&["snf", "--inline", r#"{"matrix": [[2, 0], [0, 4]]}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "snf");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn mu2_over_f5_has_four_classes() {
    let (code, v) = run(&["galois", "mu2", "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["class_count"].to_string().trim_matches('"'), "4");
}

#[test]
fn klein_bottle_file() {
    let (code, v) = run(&["simplicial", "--file", &example("klein.json")]);
    assert_eq!(code, 0);
    let h = &v["results"]["difference_cohomology"];
    assert_eq!(h, &serde_json::json!(["Z", "Z", "Z/2"]));
}

#[test]
fn exceeded_bound_exits_with_three() {
    let (code, _) = run(&["--bound", "10", "galois", "gln", "--p", "3", "--n", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn malformed_input_exits_with_two() {
    let (code, _) = run(&["snf", "--inline", "{not json"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["snf", "--inline", r#"{"matrix": "nope"}"#]);
    assert_eq!(code, 2);
}

#[test]
fn failing_check_exits_with_one() {
    let (code, v) = run(&["suite", "--criteria", "99"]);
    assert_eq!(code, 1);
    assert_eq!(v["command"], "suite");
}

#[test]
fn picard_of_minus_five() {
    let (code, v) = run(&["picard", "--d", "-5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["difference_picard"], "Z/2 + Z/2");
}
