use std::process::{Command, Output};

use serde_json::Value as Json;

fn qpbl(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qpbl"));
    cmd.args(args).env_remove("QPBL_SEED");
    if let Some(s) = seed_env {
        cmd.env("QPBL_SEED", s);
    }
    cmd.output().expect("qpbl runs")
}

fn report(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("qpbl-cli-{}-{name}", std::process::id()))
}

#[test]
fn seeded_payloads_are_identical() {
    let args = ["min-s", "--space", "ex2.5", "--seed", "7", "--grid", "2", "--random", "50"];
    let a = report(&qpbl(&args, None));
    let b = report(&qpbl(&args, None));
    assert_eq!(serde_json::to_string(&a["payload"]).unwrap(), serde_json::to_string(&b["payload"]).unwrap());

    let other = report(&qpbl(&["min-s", "--space", "ex2.5", "--seed", "8", "--grid", "2", "--random", "50"], None));
    let via_env = report(&qpbl(&["min-s", "--space", "ex2.5", "--grid", "2", "--random", "50"], Some("7")));
    assert_eq!(a["payload"], via_env["payload"]);
    // with a 2-point grid the sampled points decide the bound
    assert_ne!(a["payload"]["bound"]["value"], other["payload"]["bound"]["value"]);
}

#[test]
fn exit_codes() {
    let ok = qpbl(&["verify", "--space", "remark1"], None);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["status"], "pass");

    let sampled = qpbl(&["verify", "--space", "ex2.2", "--grid", "11", "--random", "0"], None);
    assert_eq!(sampled.status.code(), Some(0));
    assert_eq!(report(&sampled)["status"], "evidence-only");

    // s = 1 is below the minimal coefficient 8/7
    let below = qpbl(&["verify", "--space", "ex5.10", "--s", "1"], None);
    assert_eq!(below.status.code(), Some(1));
    assert_eq!(report(&below)["status"], "fail");

    let unknown = qpbl(&["verify", "--space", "no-such-space"], None);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(report(&unknown)["payload"]["error"]["code"].is_string());

    assert_eq!(qpbl(&["verify"], None).status.code(), Some(2));
    assert_eq!(qpbl(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn text_format_and_out_file() {
    let text = qpbl(&["min-s", "--space", "ex5.10", "--format", "text"], None);
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.contains("8/7"), "{s}");
    assert!(serde_json::from_str::<Json>(&s).is_err());

    let path = tmp("out.json");
    let run = qpbl(&["min-s", "--space", "ex5.10", "--out", path.to_str().unwrap()], None);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let written: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["payload"]["bound"]["value"], "8/7");
    std::fs::remove_file(path).ok();
}

#[test]
fn space_file_round_trip() {
    let path = tmp("table.json");
    std::fs::write(
        &path,
        r#"{"name": "ex5.10-copy", "points": ["0", "1", "2"], "matrix": [[0, 2, 6], [2, 1, 5], [5, 8, 2]], "s": "8/7"}"#,
    )
    .unwrap();
    let ex = report(&qpbl(&["min-s", "--space", "ex5.10"], None));
    let copy = qpbl(&["min-s", "--space-file", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).ok();
    assert_eq!(copy.status.code(), Some(0));
    assert_eq!(report(&copy)["payload"]["bound"]["value"], ex["payload"]["bound"]["value"]);
}

#[test]
fn reproduce_single_entry() {
    let r = qpbl(&["reproduce", "ex5.10-fixed-point"], None);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stdout));
    assert_eq!(qpbl(&["reproduce", "ex5.10"], None).status.code(), Some(1));
    assert_eq!(qpbl(&["reproduce", "--all", "ex5.10-fixed-point"], None).status.code(), Some(2));
}
