use std::path::PathBuf;
use std::process::{Command, Output};

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
        .to_string_lossy()
        .into_owned()
}

fn nrcslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrcslice")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nrcslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_running_example() {
    let o = nrcslice(&["eval", "-t", &data("R.json"), "--query", &data("q.nrc")]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "{[r2].<A: 2, B: 8>, [r3].<A: 4, B: 9>}");
}

#[test]
fn slice_reports_input_and_trace() {
    let o = nrcslice(&[
        "slice", "-t", &data("R.json"), "--query", &data("q.nrc"),
        "--pattern", "{[r2].<B:8;_>} U _", "--format", "json", "--stats",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["input_text"]["R"], "{[r2].<B: 3, C: 8; _>} U _");
    assert!(j["stats"]["slice_size"].as_u64().unwrap() < j["stats"]["trace_size"].as_u64().unwrap());
}

#[test]
fn qslice_and_dslice() {
    let o = nrcslice(&[
        "qslice", "-t", &data("R.json"), "--query", &data("q.nrc"), "--pattern", "{[r2].<B:8;_>} U _",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("union {if x.B = 3 then {<A: _, B: x.C>} else _ | x in R}"));

    let o = nrcslice(&[
        "dslice", "-t", &data("R.json"), "--query", &data("q.nrc"),
        "--inner", "{[r2].<B:_;_>} U _", "--outer", "{[r2].<B:8;_>} U _",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("{<A: _, B: [[x.C]]>}"));

    let o = nrcslice(&[
        "dslice", "-t", &data("R.json"), "--query", &data("q.nrc"),
        "--inner", "{[r2].<B:8;_>} U _", "--outer", "{[r3]._} U _",
    ]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn trace_then_replay() {
    let trace = tmp("trace.json");
    let o = nrcslice(&[
        "trace", "-t", &data("R.json"), "--query", &data("q.nrc"), "--format", "json",
        "--out", trace.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let same = nrcslice(&["replay", "-t", &data("R.json"), "--trace", trace.to_str().unwrap()]);
    assert!(same.status.success(), "{}", stderr(&same));
    assert_eq!(stdout(&same).trim(), "{[r2].<A: 2, B: 8>, [r3].<A: 4, B: 9>}");

    let changed = tmp("R_changed.json");
    let text = std::fs::read_to_string(data("R.json")).unwrap();
    std::fs::write(&changed, text.replacen("\"B\": {\"int\": 3}", "\"B\": {\"int\": 4}", 1)).unwrap();
    let o = nrcslice(&[
        "replay", "-t", &format!("R={}", changed.display()), "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("control-flow mismatch"), "{}", stderr(&o));
}

#[test]
fn join_with_two_tables() {
    let o = nrcslice(&[
        "slice", "-t", &data("R.json"), "-t", &data("S.json"), "--query", &data("q3.nrc"),
        "--pattern", "{[r1,s1].<A:1;_>,[r2,s2].<B:4;_>} U _",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("S = {[s1].<B: 2; _>, [s2].<B: 3, C: 4; _>} U _"), "{out}");
}

#[test]
fn exit_codes() {
    let parse = nrcslice(&["eval", "-e", "for x in"]);
    assert_eq!(parse.status.code(), Some(2));
    let ty = nrcslice(&["check", "-t", &data("R.json"), "-e", "for x in R return x.D"]);
    assert_eq!(ty.status.code(), Some(3));
    let ok = nrcslice(&["check", "-t", &data("R.json"), "--query", &data("q.nrc")]);
    assert_eq!(stdout(&ok).trim(), "{<A: int, B: int>}");
    let pat = nrcslice(&[
        "slice", "-t", &data("R.json"), "--query", &data("q.nrc"), "--pattern", "{[r9]._}",
    ]);
    assert_eq!(pat.status.code(), Some(5));
    let missing = nrcslice(&["eval", "-t", "/nonexistent/R.json", "-e", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bench_q4_small() {
    let o = nrcslice(&["bench-q4", "--n", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // (3,4,5), (5,12,13), (6,8,10), (8,15,17), (9,12,15), (12,16,20).
    assert_eq!(j["results"], 6);
    assert_eq!(j["triples"], 8000);
}
