use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squarescope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn fx(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn ellipse_squares_report() {
    let out = run(&["squares", &fx("ellipse.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "squares");
    assert_eq!(r["results"]["counts"], serde_json::json!({"I": 1, "II": 0, "III": 0}));
    assert_eq!(r["results"]["parity"]["verdict"], "PASS");
    assert_eq!(r["inputs"]["files"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(r.get("error").is_none());
}

#[test]
fn csv_curve_matches_json_curve() {
    let a = report(&run(&["squares", "--grid", "128", &fx("ellipse.json")]));
    let b = report(&run(&["squares", "--grid", "128", &fx("ellipse.csv")]));
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn exit_codes() {
    let cases = [
        (vec!["squares".to_string(), fx("circle.json")], 3, "continuum"),
        (vec!["squares".to_string(), fx("malformed.json")], 2, "input"),
        (vec!["squares".to_string(), fx("figure_eight.json")], 2, "input"),
        (vec!["squares".to_string(), fx("does_not_exist.json")], 2, "input"),
        (vec!["envelope".to_string(), fx("square_loop.json")], 4, "zero-on-loop"),
        (vec!["envelope".to_string(), fx("circle.json")], 3, "continuum"),
        (vec!["spiral".into(), "splitpair".into(), fx("ellipse.json")], 2, "input"),
        (vec!["spiral".into(), "trochoid".into(), fx("relation.json")], 2, "input"),
        (vec!["squares".to_string(), "--grid".into(), "8".into(), fx("ellipse.json")], 2, "input"),
    ];
    for (args, code, kind) in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&a);
        assert_eq!(out.status.code(), Some(code), "{a:?}");
        let r = report(&out);
        assert_eq!(r["error"]["kind"], kind, "{a:?}");
        assert!(r.get("results").is_none(), "{a:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["squares"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn clockwise_input_is_reoriented_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("ellipse.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["samples"].as_array_mut().unwrap().reverse();
    let path = dir.path().join("cw.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let out = run(&["squares", "--grid", "128", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["warnings"][0].as_str().unwrap().contains("clockwise"));
    assert_eq!(r["results"]["counts"]["I"], 1);
}

#[test]
fn out_dir_gets_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["squares", "--grid", "128", "--svg", "--out", d, &fx("ellipse.json")]);
    assert_eq!(out.status.code(), Some(0));
    let saved = std::fs::read(dir.path().join("squares.json")).unwrap();
    assert_eq!(saved, out.stdout);
    let svg = std::fs::read_to_string(dir.path().join("squares.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    // x range [-2, 2] and y range [-1, 1] with 5% margins
    assert!(svg.contains("viewBox=\"-2.2 -1.1 4.4 2.2\""), "{}", &svg[..200]);
    assert_eq!(svg.matches("<polygon").count(), 2);
}

#[test]
fn envelope_svg_and_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["envelope", "--grid", "256", "--svg", "--out", d, &fx("seed_2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["consistency"]["verdict"], "PASS");
    assert_eq!(r["results"]["spanning_components"], 0);
    assert!(dir.path().join("envelope.svg").exists());
}

#[test]
fn envelope_verifies_a_candidate_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cand.json");
    // two vertical strokes outside the 2x1 ellipse
    let e1: Vec<[f64; 2]> = (0..40).map(|k| [2.4, -0.5 + k as f64 / 40.0]).collect();
    let e2: Vec<[f64; 2]> = (0..40).map(|k| [-2.4, -0.5 + k as f64 / 40.0]).collect();
    std::fs::write(&path, serde_json::json!({"e1": e1, "e2": e2}).to_string()).unwrap();
    let out = run(&["envelope", "--grid", "128", "--candidate", path.to_str().unwrap(), &fx("ellipse.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let cand = &r["results"]["candidates"][0];
    assert_eq!(cand["source"], "file");
    assert_eq!(cand["verify"]["outside"]["pass"], true);
    assert_eq!(r["inputs"]["files"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_curve_prints_or_writes() {
    let out = run(&["gen-curve", "--seed", "5", "--samples", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let curve: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(curve["samples"].as_array().unwrap().len(), 64);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.csv");
    let out = run(&["gen-curve", "--shape", "ellipse", "--format", "csv", "--samples", "64", "-o", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["curve"]["samples"], 64);
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("x,y\n"));
}

#[test]
fn spiral_examples() {
    let r = report(&run(&["spiral", "splitpair", &fx("splitpair.json")]));
    assert_eq!(r["results"]["all_good"], true);
    assert_eq!(r["results"]["trajectory"][0]["p"], serde_json::json!([-1.0, 2.0]));

    let r = report(&run(&["spiral", "area", &fx("area.json")]));
    assert!(r["results"]["results"][0]["relative_gap"].as_f64().unwrap() < 5e-3);

    let r = report(&run(&["spiral", "angle", &fx("offsets.json")]));
    assert_eq!(r["results"]["feasible"], true);

    let r = report(&run(&["spiral", "check", &fx("spiral_path.json"), &fx("relation.json")]));
    assert_eq!(r["results"]["verdict"], "PASS");
    assert!(r["results"]["lift"]["round_trip_error"].as_f64().unwrap() < 1e-9);

    let r = report(&run(&["spiral", "trochoid", &fx("trochoid.json")]));
    assert_eq!(r["results"]["monotonicity"], "PASS");
}

#[test]
fn bad_thread_count_is_a_warning() {
    let out = Command::new(env!("CARGO_BIN_EXE_squarescope"))
        .args(["spiral", "angle", &fx("offsets.json")])
        .env("SQUARESCOPE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["warnings"][0].as_str().unwrap().contains("SQUARESCOPE_THREADS"));
}
