use std::process::{Command, Output};

use serde_json::Value;
use subentropy::archive::read_archive;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subentropy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analytic_json_schema() {
    let o = run(&[
        "analytic",
        "--dims",
        "2x2",
        "--quantity",
        "entropy",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let doc = stdout_json(&o);
    assert_eq!(doc["tool"], "subentropy");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["precision"], 30);
    assert_eq!(doc["config"]["cli"]["command"]["command"], "analytic");
    assert_eq!(doc["result"]["values"][0]["exact"], "1/3");
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["analytic", "--dims", "2x2", "--quantity", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "mc",
            "--dims",
            "2x2",
            "--keep",
            "0,0",
            "--quantity",
            "entropy"
        ])
        .status
        .code(),
        Some(2)
    );
    let o = run(&["verify", "--check", "tripartite"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass"));
}

#[test]
fn cap_override_from_environment() {
    let o = bin()
        .args([
            "mc",
            "--dims",
            "4x4",
            "--quantity",
            "entropy",
            "--samples",
            "10",
        ])
        .env("SUBENTROPY_STATE_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 8"));
    let o = bin()
        .args([
            "mc",
            "--dims",
            "2x2",
            "--quantity",
            "entropy",
            "--samples",
            "10",
        ])
        .env("SUBENTROPY_STATE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn archive_appends_reproducible_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let p = path.to_str().unwrap();
    for workers in ["1", "3"] {
        let o = run(&[
            "mc",
            "--dims",
            "2x2x4",
            "--a",
            "0",
            "--b",
            "1",
            "--quantity",
            "mutual-info",
            "--samples",
            "2000",
            "--seed",
            "7",
            "--workers",
            workers,
            "--archive",
            p,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let records = read_archive(&path).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].payload, records[1].payload);
    assert_eq!(records[0].schema_version, 1);
    assert!(records[0].z.is_some());
    assert_eq!(
        records[0].oracle.as_ref().unwrap()["exact"],
        "200611/720720"
    );
    assert_eq!(records[1].config["cli"]["command"]["workers"], 3);
}

#[test]
fn unwritable_archive_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no").join("such").join("runs.jsonl");
    let o = run(&[
        "analytic",
        "--dims",
        "2x2",
        "--quantity",
        "purity",
        "--archive",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ledger_lists_claims() {
    let o = run(&["ledger", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("check_delta_interval"));
    assert!(text.contains("tripartite_avg_mutual_info"));
}
