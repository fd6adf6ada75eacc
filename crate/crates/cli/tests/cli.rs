use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbs")).args(args).env_remove("GBS_MAX_STATES").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn invariants_of_bs16() {
    let out = gbs(&["invariants", &fixture("bs16.json")]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["b1"], 1);
    assert_eq!(v["reduced"], true);
    assert_eq!(v["strict_ascending_loops"], serde_json::json!(["e0"]));
    assert_eq!(v["modulus"]["integer_witness"], "6");
}

#[test]
fn bs24_graphs_are_connected_in_two_moves() {
    let out = gbs(&["same-space", &fixture("bs24_loop.json"), &fixture("bs24_twovertex.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["connected"], true);
    assert!(v["trace"]["length"].as_u64().unwrap() <= 2);
}

#[test]
fn inconclusive_search_exits_2() {
    let out = gbs(&[
        "same-space",
        &fixture("bs24_loop.json"),
        &fixture("bs24_twovertex.json"),
        "--moves",
        "slides",
        "--max-label",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json_of(&out)["connected"].is_null());
}

#[test]
fn search_errors_exit_3() {
    let out = gbs(&["same-space", &fixture("bs16.json"), &fixture("missing.json")]);
    assert_eq!(out.status.code(), Some(3));
    let out = gbs(&["same-space", &fixture("bs16.json"), &fixture("two_loops.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(gbs(&["dot", ""]).status.code(), Some(64));
    assert_eq!(gbs(&["dot"]).status.code(), Some(64));
    assert_eq!(gbs(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(gbs(&["apply", &fixture("bs16.json"), "twist e0"]).status.code(), Some(64));
}

#[test]
fn validate_reports_zero_label() {
    let out = gbs(&["validate", &fixture("zero_label.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert!(v["diagnostics"][0].as_str().unwrap().contains("ZeroLabel"));
    let ok = gbs(&["validate", &fixture("na3.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["edges"], 3);
}

#[test]
fn semantic_errors_exit_1() {
    let out = gbs(&["apply", &fixture("bs24_loop.json"), "collapse e0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not collapsible"));
}

#[test]
fn apply_returns_inverse() {
    let out = gbs(&["apply", &fixture("bs24_loop.json"), "expand v0 d=2 ends=[e0.0,e0.1] sign=+"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["inverse"], "collapse e1");
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn slides_list_is_json() {
    let out = gbs(&["slides", &fixture("na3.json"), "--list"]);
    let v = json_of(&out);
    assert_eq!(v, serde_json::json!(["slide e0.1 across e1+"]));
}

#[test]
fn reduce_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbs(&["reduce", &fixture("bs24_twovertex.json"), "--all", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let written = json_of(&out);
    let paths = written.as_array().unwrap();
    assert!(!paths.is_empty());
    for p in paths {
        let back = gbs(&["validate", p.as_str().unwrap()]);
        assert_eq!(back.status.code(), Some(0));
    }
}

#[test]
fn reduce_collapses_lowest_edge_first() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.json");
    std::fs::write(
        &path,
        r#"{"vertices":["v0","v1","v2"],"edges":[
            {"id":"e0","ends":[{"vertex":"v0","label":2},{"vertex":"v1","label":1}]},
            {"id":"e1","ends":[{"vertex":"v1","label":1},{"vertex":"v2","label":3}]}]}"#,
    )
    .unwrap();
    let v = json_of(&gbs(&["reduce", path.to_str().unwrap()]));
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 1);
    assert_eq!(edges[0]["id"], "e1");
}

#[test]
fn shelters_survivors_retract() {
    let na3 = fixture("na3.json");
    let s = json_of(&gbs(&["shelters", &na3]));
    assert!(s["shelters"].is_array());
    let v = json_of(&gbs(&["survivors", &na3]));
    assert_eq!(v["spine_member"], true);
    let r = json_of(&gbs(&["retract", &na3]));
    assert_eq!(r["edges"].as_array().unwrap().len(), 3);
    assert_eq!(gbs(&["survivors", &fixture("bs16.json")]).status.code(), Some(1));
}

#[test]
fn enumerate_reports_and_respects_state_cap() {
    let out = gbs(&["enumerate", &fixture("bs24_loop.json"), "--moves", "slides", "--max-label", "64"]);
    let v = json_of(&out);
    assert_eq!(v["exhausted"], true);
    assert_eq!(v["vertex_counts"], serde_json::json!({"1": 1}));

    let capped = Command::new(env!("CARGO_BIN_EXE_gbs"))
        .args(["enumerate", &fixture("two_loops.json"), "--max-label", "8", "--max-edges", "4"])
        .env("GBS_MAX_STATES", "50")
        .output()
        .unwrap();
    let v = json_of(&capped);
    assert_eq!(v["exhausted"], false);
    assert_eq!(v["bounds"]["max_states"], 50);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_gbs"))
        .args(["enumerate", &fixture("bs24_loop.json"), "--max-states", "7", "--max-label", "8"])
        .env("GBS_MAX_STATES", "50")
        .output()
        .unwrap();
    assert_eq!(json_of(&flag_wins)["bounds"]["max_states"], 7);
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", &fixture("bs16.json"), "--max-label", "12", "--max-edges", "3"];
    assert_eq!(gbs(&args).stdout, gbs(&args).stdout);
}

#[test]
fn dot_marks_unit_ends() {
    let out = gbs(&["dot", &fixture("bs16.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph gbs {"));
    assert!(text.contains("label=\"e0: 1,6\""));
    assert!(text.contains("arrowtail=dot"));
}
