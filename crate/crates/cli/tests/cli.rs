use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn extfair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extfair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const INTRO: &str = r#"{
  "schema": "extfair/instance-2d/1",
  "agents": 2,
  "items": ["g1", "g2"],
  "valuations": [
    {"v": ["6", "5"], "vprime": ["-1", "-100"]},
    {"v": ["5", "6"], "vprime": ["-100", "-1"]}
  ]
}"#;

fn alloc(a: &[usize]) -> String {
    format!(r#"{{"schema": "extfair/alloc/1", "assignment": {a:?}}}"#)
}

#[test]
fn check_exit_codes_follow_verdicts() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let a = write(&dir, "a.json", &alloc(&[1, 0]));
    let o = extfair(&["check", "--instance", s(&inst), "--allocation", s(&a), "--notions", "ef1,prop-e", "--space", "V"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let a = write(&dir, "a.json", &alloc(&[0, 1]));
    let o = extfair(&["check", "--instance", s(&inst), "--allocation", s(&a), "--notions", "ef", "--space", "W"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails"));
}

#[test]
fn check_json_has_witness() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let a = write(&dir, "a.json", &alloc(&[0, 1]));
    let o = extfair(&[
        "check", "--instance", s(&inst), "--allocation", s(&a), "--notions", "ef", "--space", "w", "--json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ef = &v["verdicts"][0];
    assert_eq!(ef["holds"], false);
    assert_eq!(ef["witness"]["lhs"], "7");
    assert_eq!(ef["witness"]["rhs"], "105");
}

#[test]
fn bad_input_is_exit_2() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let broken = write(&dir, "b.json", "{\"schema\": \"extfair/instance-2d/1\"");
    let a = write(&dir, "a.json", &alloc(&[0, 1]));
    let short = write(&dir, "s.json", &alloc(&[0]));
    for args in [
        vec!["check", "--instance", s(&broken), "--allocation", s(&a), "--notions", "ef"],
        vec!["check", "--instance", s(&inst), "--allocation", s(&short), "--notions", "ef"],
        vec!["check", "--instance", s(&inst), "--allocation", s(&a), "--notions", "nope"],
        vec!["check", "--instance", s(&inst), "--allocation", s(&a), "--notions", "alpha-mms"],
        vec!["gen", "--agents", "2", "--items", "2", "--kind", "mixed", "--externality", "inverse"],
        vec!["paper-suite", "--filter", "NOT_A_CLAIM"],
        vec!["builtin", "vg-goods(1,1)"],
        vec!["frobnicate"],
    ] {
        assert_eq!(extfair(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn transform_writes_shifted_one_d() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let out = dir.path().join("t.json");
    let o = extfair(&["transform", "--instance", s(&inst), "--out", s(&out)]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "extfair/instance-1d/1");
    assert_eq!(v["valuations"][0]["w"], serde_json::json!(["7", "105"]));
    assert_eq!(v["shift"], serde_json::json!(["-101", "-101"]));

    // the 1-D document is itself a valid W instance
    let a = write(&dir, "a.json", &alloc(&[1, 0]));
    let o = extfair(&["check", "--instance", s(&out), "--allocation", s(&a), "--notions", "ef,prop", "--space", "W"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn mms_reports_both_spaces() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let o = extfair(&["mms", "--instance", s(&inst), "--decompose", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a0 = &v["agents"][0];
    assert_eq!(a0["mu_w"], "7");
    assert_eq!(a0["mu_v"], "-94");
    assert_eq!(a0["mu_plus"], "6");
    assert_eq!(a0["mu_minus"], "-100");
}

#[test]
fn allocate_round_robin_and_exhaustive() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", INTRO);
    let out = dir.path().join("a.json");
    let o = extfair(&["allocate", "--instance", s(&inst), "--algorithm", "round-robin", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(a["assignment"], serde_json::json!([1, 0]));

    let o = extfair(&["allocate", "--instance", s(&inst), "--algorithm", "exhaustive:leximin", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["allocation"], serde_json::json!([1, 0]));
}

#[test]
fn gen_is_deterministic_and_thread_independent() {
    let args = ["gen", "--agents", "3", "--items", "5", "--kind", "goods", "--externality", "correlated", "--seed", "11"];
    let a = extfair(&args);
    let b = extfair(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "g.json", &stdout(&a));
    let one = extfair(&["--threads", "1", "mms", "--instance", s(&inst), "--json"]);
    let four = extfair(&["--threads", "4", "mms", "--instance", s(&inst), "--json"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn builtin_with_override() {
    let o = extfair(&["builtin", "vc-chores(1/20000,-1/1000)"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agents"], 3);
    assert_eq!(v["items"].as_array().unwrap().len(), 12);
}

#[test]
fn suite_filter_runs_selected_claims() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("suite.json");
    let o = extfair(&["paper-suite", "--filter", "INTRO_EF,transform_intro", "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ids: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["INTRO_EF", "TRANSFORM_INTRO"]);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["status"] == "PASS"));
}

#[test]
fn discrepancy_warns_but_exits_zero() {
    let o = extfair(&["paper-suite", "--filter", "VG_INTEGRAL"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("VG_INTEGRAL"));
}
