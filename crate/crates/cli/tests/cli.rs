use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn polarcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarcut")).args(args).output().expect("binary runs")
}

fn polarcut_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polarcut"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn polar_of_the_quadrant() {
    let out = polarcut(&["polar", &fixture("quadrant.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["points"], json!([["0", "0"], ["1", "0"], ["0", "1"]]));
    assert_eq!(report["khat_points"], json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn rho_and_gauge_at_listed_points() {
    let out = polarcut(&["rho", &fixture("quadrant_points.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["values"][0], json!({"x": ["-1", "-2"], "value": "-1"}));
    assert_eq!(report["values"][1]["value"], "3/2");

    let out = polarcut(&["gauge", &fixture("quadrant_points.json")]);
    let report = json_out(&out);
    let values: Vec<&str> = report["values"].as_array().unwrap().iter().map(|v| v["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["0", "3/2", "0"]);
}

#[test]
fn verify_random_corpus_passes() {
    let out = polarcut(&["verify", "--random", "100", "--seed", "7", "--samples", "200", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "violations: 0"), "{}", &text[..200.min(text.len())]);
    assert!(text.lines().any(|l| l == "instances: 100"));
}

#[test]
fn verify_reads_one_or_many_polyhedra() {
    let out = polarcut(&["verify", &fixture("quadrant.json"), "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["instances"], 1);
    let out = polarcut(&["verify", &fixture("box.json"), "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["instances"], 2);
    assert_eq!(report["violations"], 0);
    assert_eq!(report["results"][0]["sandwich"]["violations"], json!([]));
}

#[test]
fn verify_needs_an_input_or_random() {
    assert_eq!(polarcut(&["verify"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "--random", "5", "--seed", "11", "--samples", "30"];
    let (a, b) = (polarcut(&args), polarcut(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = polarcut(&["verify", "--random", "5", "--seed", "12", "--samples", "30"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn split_cut_and_its_validity() {
    let out = polarcut(&["cut", &fixture("split.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out)["alpha"], json!(["2", "2"]));

    let out = polarcut(&["check-cut", &fixture("split_cut.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["verdict"], "valid_on_region");
    assert_eq!(report["min_value"], "1");
}

#[test]
fn violated_cut_reports_x_and_s() {
    let out = polarcut(&["check-cut", &fixture("zero_cut.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_out(&out);
    assert_eq!(report["verdict"], "violated");
    assert_eq!(report["x"], json!(["1"]));
    assert_eq!(report["s"], json!(["1/2", "0"]));
}

#[test]
fn non_s_free_body_is_refused_with_witness() {
    for cmd in ["cut", "maximal"] {
        let out = polarcut(&[cmd, &fixture("fat_interval.json")]);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        let report = json_out(&out);
        assert_eq!(report["refused"], true);
        assert_eq!(report["z"], json!(["0"]));
    }
    let out = polarcut(&["sfree", &fixture("fat_interval.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_out(&out), json!({"verdict": "witness", "z": ["0"]}));
    let out = polarcut(&["sfree", &fixture("split.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out), json!({"verdict": "free_on_region", "radius": 5}));
}

#[test]
fn triangle_is_certified_maximal() {
    let out = polarcut(&["maximal", &fixture("triangle.json"), "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_out(&out);
    assert_eq!(report["certified"], true);
    assert_eq!(report["heuristic"], false);
    assert_eq!(report["radius"], 3);
    assert_eq!(report["uncertified_facets"], json!([]));
}

#[test]
fn malformed_json_reports_position() {
    let out = polarcut_stdin(&["polar", "-"], "{\"dim\": 2,\n \"rows\": [[1, 0] [0, 1]]}");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("malformed JSON") && err.contains("line 2 column"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_errors_name_the_field() {
    let out = polarcut_stdin(&["polar", "-"], r#"{"dim": 2, "rows": [[1, 0], [0, 0.5]], "rhs": [1, 1]}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`rows[1][1]`"), "{}", stderr(&out));

    let out = polarcut_stdin(&["cut", "-"], r#"{"instance": {"dim": 1, "f": ["1/2"], "rays": [[1]]}, "bdy": {}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bdy"), "{}", stderr(&out));

    let out = polarcut_stdin(&["cut", "-"], r#"{"instance": {"dim": 1, "f": ["1/2"], "rays": [[1, 2]]}, "body": {"rows": [[1]], "rhs": [1]}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("instance"), "{}", stderr(&out));
}

#[test]
fn invalid_instances_exit_2() {
    // Origin on the boundary.
    let out = polarcut_stdin(&["polar", "-"], r#"{"dim": 1, "rows": [[1]], "rhs": [0]}"#);
    assert_eq!(out.status.code(), Some(2));
    // Integral f.
    let out = polarcut_stdin(&["cut", "-"], r#"{"instance": {"dim": 1, "f": [1], "rays": [[1]]}, "body": {"rows": [[1]], "rhs": [2]}}"#);
    assert_eq!(out.status.code(), Some(2));
    // f outside the body.
    let out = polarcut_stdin(&["cut", "-"], r#"{"instance": {"dim": 1, "f": ["1/2"], "rays": [[1]]}, "body": {"rows": [[1]], "rhs": [0]}}"#);
    assert_eq!(out.status.code(), Some(2));
    // Point of the wrong dimension.
    let out = polarcut_stdin(&["rho", "-"], r#"{"dim": 1, "rows": [[1]], "rhs": [1], "points": [[1, 2]]}"#);
    assert_eq!(out.status.code(), Some(2));
    // Missing file and bad options.
    assert_eq!(polarcut(&["polar", "/nonexistent/k.json"]).status.code(), Some(2));
    assert_eq!(polarcut(&["cut", &fixture("split.json"), "--radius", "0"]).status.code(), Some(2));
    assert_eq!(polarcut(&["polar", &fixture("quadrant.json"), "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    let json = json_out(&polarcut(&["maximal", &fixture("triangle.json")]));
    let text = String::from_utf8(polarcut(&["maximal", &fixture("triangle.json"), "--format", "text"]).stdout).unwrap();
    let keys: Vec<&str> = text.lines().filter_map(|l| l.split_once(':').map(|(k, _)| k)).collect();
    let json_keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, json_keys);
    assert!(text.contains("facet_witnesses: [[0, 1], [1, 0], [1, 1]]"));
}
