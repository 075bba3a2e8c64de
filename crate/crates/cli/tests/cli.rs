use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultrafix")).args(args).output().expect("binary runs")
}

fn run_spec(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = spec(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

/// Integer value of little-endian unit digits times `p^v`, mod `p^k`.
fn residue(x: &Value, k: u32) -> u64 {
    let p = x["prime"].as_u64().unwrap();
    let v = x["valuation"].as_u64().unwrap() as u32;
    let digits: Vec<u64> = x["unit_digits"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    let unit = digits.iter().take(k as usize).rev().fold(0, |acc, d| acc * p + d);
    unit * p.pow(v) % p.pow(k)
}

#[test]
fn constant_map_takes_one_iteration() {
    let out = run_spec("solve", "constant.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["certificate"]["iterations"], 1);
    assert_eq!(j["certificate"]["residual_valuation"], "inf");
}

#[test]
fn mobius_solve_reports_limit() {
    let out = run_spec("solve", "mobius.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &json(&out)["certificate"];
    assert_eq!(residue(&cert["limit"], 2), 6);
    assert!(cert["residual_valuation"].as_i64().is_none_or(|v| v >= 20));
    assert!(cert["trace"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == 2));
}

#[test]
fn parameter_off_ep_is_a_domain_error() {
    let out = run_spec("solve", "bad-parameter.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parameter c"));
}

#[test]
fn malformed_spec_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"prime": 5, "terms": [], "initail": []}"#).unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("initail"));

    let out = run(&["solve", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precision_and_iteration_limits() {
    assert_eq!(run_spec("solve", "mobius.json", &["--target", "57"]).status.code(), Some(3));
    assert_eq!(run_spec("solve", "mobius.json", &["--max-iter", "3"]).status.code(), Some(4));
}

#[test]
fn flags_override_the_file() {
    let out = run_spec("solve", "mobius.json", &["--precision", "30", "--target", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["precision"], 30);
    assert_eq!(j["target"], 10);
}

#[test]
fn csv_trace() {
    let out = run_spec("solve", "mobius.json", &["--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,valuation"));
    assert!(lines.all(|l| l.split(',').count() == 2));
}

#[test]
fn coupled_solve() {
    let out = run_spec("coupled", "coupled.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &json(&out)["certificate"];
    let x = residue(&cert["x"]["limit"], 3);
    assert_eq!(x, residue(&cert["z"]["limit"], 3));
    assert_eq!(x % 5, 1);
}

#[test]
fn tree_of_ones_has_root_one() {
    let out = run_spec("tree", "tree-ones.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(residue(&json(&out)["root"], 10), 1);
}

#[test]
fn tree_uniqueness_gap_reaches_depth() {
    let out = run_spec("tree", "tree-mobius.json", &["--compare-boundary", "random"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let gap = &j["uniqueness"]["root_gap"];
    assert!(gap == "inf" || gap.as_i64().unwrap() >= 10, "{gap}");
    assert_eq!(j["levels"].as_array().unwrap().len(), 11);
    assert_eq!(j["levels"][10]["vertices"], 1024);
}

#[test]
fn tree_cap_is_enforced() {
    assert_eq!(run_spec("tree", "tree-too-deep.json", &[]).status.code(), Some(1));
}

#[test]
fn tree_invariant_solves_squared_map() {
    let out = run_spec("tree", "tree-mobius.json", &["--invariant"]);
    let j = json(&out);
    // both successors contribute a factor, so u = f(u, u)^2
    assert_eq!(residue(&j["invariant"]["value"], 2), 11);
}

#[test]
fn verify_exit_codes() {
    let params = r#"{"a":1,"b":1,"c":1,"a1":1,"b1":1,"c1":6}"#;
    let out = run(&["verify", "mobius", "--prime", "5", "--params", params]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["pass"], true);
    assert!(j["min_observed_gap"].as_i64().is_none_or(|g| g >= 1));

    let out = run(&["verify", "identity", "--prime", "5", "--params", r#"{"declared_k": 1}"#]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["pass"], false);

    let linfrac = r#"{"a":[[1,1],[1,1]],"a0":[1,1],"b":[[1,1],[1,1]],"b0":[1,1]}"#;
    assert_eq!(run(&["verify", "linfrac", "--prime", "3", "--params", linfrac]).status.code(), Some(2));
    assert_eq!(run(&["verify", "mobius", "--params", params]).status.code(), Some(1));
}

#[test]
fn eval_exp_and_map() {
    let out = run_spec("eval", "exp.json", &[]);
    assert_eq!(residue(&json(&out)["value"], 2), 6);
    let out = run_spec("eval", "eval-mobius.json", &[]);
    // 4/9 = 4 * 14 = 56 mod 125
    assert_eq!(residue(&json(&out)["value"], 3), 56);
}

#[test]
fn output_is_deterministic() {
    for (cmd, name) in [("solve", "mobius.json"), ("tree", "tree-mobius.json")] {
        let a = run_spec(cmd, name, &["--seed", "0"]);
        let b = run_spec(cmd, name, &["--seed", "0"]);
        assert_eq!(a.stdout, b.stdout);
    }
}
