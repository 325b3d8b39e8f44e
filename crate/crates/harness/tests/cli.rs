use itersum_harness::{read_catalog, Status};
use serde_json::Value;
use std::fs;
use std::process::{Command, Output};

fn itersum() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_itersum"));
    c.env_remove("ITERSUM_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    itersum().args(args).output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn classify_prints_a_passing_record() {
    let out = run(&["classify", "--group", "C12", "--set", "{0,1,2}", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["status"], "pass");
    assert!(recs[0].to_string().contains("L3.i.a"));
}

#[test]
fn verify_egz_passes() {
    let out = run(&["verify", "egz", "--group", "C3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["status"], "pass");
}

#[test]
fn unmet_hypothesis_is_not_a_failure() {
    let out = run(&["verify", "t12", "--group", "C25", "--n", "2", "--item", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["status"], "not_applicable");
}

#[test]
fn example_reports_its_avoided_sums() {
    let out = run(&["example", "A1", "--group", "C4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("{0,1,3}"), "{text}");
}

#[test]
fn bad_input_exits_with_usage_status() {
    assert_eq!(run(&["sumset", "--group", "D4", "--a", "{0}", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_appends_to_a_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["davenport", "--group", "C2xC2", "--out", p]).status.code(), Some(0));
    assert_eq!(run(&["verify", "olson", "--group", "C4", "--out", p]).status.code(), Some(0));
    let recs = read_catalog(&path).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0].payload["davenport"], 3);
    assert!(recs.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = itersum()
        .env("ITERSUM_OUT_DIR", dir.path())
        .args(["subsums", "--group", "C4", "--seq", "0^2 1 2^2", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let recs = read_catalog(dir.path().join("catalog.jsonl")).unwrap();
    assert_eq!(recs.len(), 1);
}

#[test]
fn sweep_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    let cat = dir.path().join("out.jsonl");
    fs::write(
        &cfg,
        format!("task = egz\norders = 1..6\nout = {}\n", cat.display()),
    )
    .unwrap();
    let out = run(&["sweep", cfg.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = &lines(&out)[0];
    assert_eq!(summary["task"], "egz");
    assert_eq!(summary["counts"]["failed"], 0);
    let recs = read_catalog(&cat).unwrap();
    assert_eq!(recs.len(), summary["counts"]["checked"].as_u64().unwrap() as usize);
    assert!(!cat.with_extension("jsonl.partial").exists());
}

#[test]
fn counterexamples_file_stays_empty_on_success() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    let out = run(&["verify", "egz", "--group", "C2xC2", "--emit-counterexamples", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(read_catalog(&bad).map(|r| r.is_empty()).unwrap_or(true));
}
