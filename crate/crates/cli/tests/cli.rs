use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use awarekit::fixtures;
use awarekit::io::{load_model, model_to_string, Model};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_awarekit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn trade() -> String {
    fixture("trade.klm.json").display().to_string()
}

#[test]
fn shipped_fixtures_match_the_library() {
    let same = |file: &str, m: Model| {
        let loaded = load_model(fixture(file)).unwrap();
        assert_eq!(model_to_string(&loaded, None), model_to_string(&m, None), "{file}");
    };
    same("trade.klm.json", Model::Klm(fixtures::trade()));
    same("trade.fh.json", Model::Fh(fixtures::trade_fh()));
    same("triv1.klm.json", Model::Klm(fixtures::triv1()));
    same("three_space.hms.json", Model::Hms(fixtures::three_space_hms()));
}

#[test]
fn eval_unawareness_of_l() {
    let o = run(&["eval", "--model", &trade(), "--at", "w2@{i,l}", "--lang", "L", "A{b} l"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "False");
    let o = run(&["eval", "--model", &trade(), "--at", "w1", "--lang", "LKA", "X{o} i"]);
    assert_eq!(stdout(&o).trim(), "False");
    let o = run(&["eval", "--model", &trade(), "--at", "w2@{i}", "l"]);
    assert_eq!(stdout(&o).trim(), "Undefined");
    let o = run(&["--json", "eval", "--model", &trade(), "--at", "w1@{i,l}", "K{b} i"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], "True");
}

#[test]
fn transforms_write_valid_models() {
    let dir = tempfile::tempdir().unwrap();
    let hms = dir.path().join("trade.hms.json");
    let o = run(&["transform", "--kind", "H", "--in", &trade(), "--out", hms.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);

    let o = run(&["check", "--model", hms.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("  pass ").count(), 7);

    let back = dir.path().join("back.klm.json");
    let o = run(&["transform", "--kind", "L", "--in", hms.to_str().unwrap(), "--out", back.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("state correspondence"));
    let o = run(&["check", "--model", back.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let fh = dir.path().join("trade.fh.json");
    let klm = dir.path().join("again.klm.json");
    assert!(run(&["transform", "--kind", "FH", "--in", &trade(), "--out", fh.to_str().unwrap()]).status.success());
    assert!(run(&["transform", "--kind", "K", "--in", fh.to_str().unwrap(), "--out", klm.to_str().unwrap()]).status.success());
    let again = load_model(&klm).unwrap().into_klm().unwrap();
    assert_eq!(again, fixtures::trade());

    let o = run(&["transform", "--kind", "K", "--in", &trade(), "--out", klm.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn axiom_suites_and_the_fifth_axiom() {
    let o = run(&["axioms", "--suite", "hms", "--models", &trade(), "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["axioms", "--suite", "hms", "--models", &trade(), "--depth", "1", "--include-5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID 5"));
    assert!(stdout(&o).contains("w2@{i,l}"));

    let o = run(&["--json", "axioms", "--suite", "hms", "--models", &trade(), "--include-5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["checked", "depth", "failures", "kind"]);
    assert_eq!(v["kind"], "axioms");
    assert_eq!(v["failures"][0]["state"], "w2@{i,l}");
    assert_eq!(v["failures"][0]["right"], "True");

    let o = run(&["axioms", "--suite", "lga", "--models", &trade(), fixture("trade.fh.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn equivalence_reports() {
    let o = run(&["equiv", "--model", &trade(), "--lang", "L", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 disagreements"));
    let o = run(&["--json", "equiv", "--model", &trade(), "--lang", "LKA", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "equivalence");
    assert!(v["failures"].as_array().unwrap().is_empty());
    let fh = fixture("trade.fh.json");
    assert!(run(&["equiv", "--model", fh.to_str().unwrap(), "--lang", "LKA"]).status.success());
    let hms = fixture("three_space.hms.json");
    assert!(run(&["equiv", "--model", hms.to_str().unwrap()]).status.success());
    assert_eq!(run(&["equiv", "--model", hms.to_str().unwrap(), "--lang", "LKA"]).status.code(), Some(2));
}

#[test]
fn enumeration() {
    let o = run(&["enumerate", "--atoms", "i", "--agents", "b", "--depth", "1"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(&lines[..2], ["T", "i"]);
    let o = run(&["enumerate", "--model", &trade(), "--depth", "3", "--count"]);
    assert_eq!(stdout(&o).trim(), "26793");
    let o = run(&["enumerate", "--atoms", "i", "--agents", "b", "--depth", "1", "--lang", "LKA", "--count"]);
    assert_eq!(stdout(&o).trim(), "11");
}

#[test]
fn checks_report_property_failures() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("trade.klm.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["awareness"]["b"]["w2"] = serde_json::json!(["i", "l"]);
    v["awareness"]["b"]["w3"] = serde_json::json!([]);
    let bad = dir.path().join("bad.klm.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["check", "--model", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL II"));
    assert_eq!(run(&["eval", "--model", bad.to_str().unwrap(), "--at", "w1", "i"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["eval", "--model", "/nonexistent.json", "--at", "w1", "i"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--model", &trade(), "--at", "w9", "i"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--model", &trade(), "--at", "w1", "(i &"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["axioms", "--suite", "hms"]).status.code(), Some(2));
}
