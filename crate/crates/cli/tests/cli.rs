//! End-to-end checks of the `navbench` binary and its exit codes.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::scenarios_dir;

fn navbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_navbench"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn sample(name: &str) -> String {
    scenarios_dir()
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = navbench(&["validate", &sample("open_field")]);
    assert_eq!(code(&ok), 0);
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "ok");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(sample("open_field")).unwrap()).unwrap();
    v["world"]["goal_radius"] = (-1.0).into();
    fs::write(&bad, v.to_string()).unwrap();
    let out = navbench(&["validate", path(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("world.goal_radius: must be positive"));

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "not json").unwrap();
    assert_eq!(code(&navbench(&["validate", path(&garbage)])), 2);
}

#[test]
fn run_metrics_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = navbench(&[
        "run",
        "--scenario",
        &sample("open_field"),
        "--controller",
        "pid",
        "--seed",
        "5",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let log = dir.path().join("open_field__pid__5.jsonl");
    let csv = fs::read_to_string(dir.path().join("open_field__pid__5.csv")).unwrap();

    let again = navbench(&["metrics", "--record", path(&log)]);
    assert_eq!(code(&again), 0);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), csv);

    let svg = dir.path().join("run.svg");
    assert_eq!(
        code(&navbench(&[
            "plot",
            "--record",
            path(&log),
            "--out",
            path(&svg)
        ])),
        0
    );
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let empty = dir.path().join("empty.jsonl");
    let header = fs::read_to_string(&log)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    fs::write(&empty, header + "\n").unwrap();
    assert_eq!(
        code(&navbench(&[
            "plot",
            "--record",
            path(&empty),
            "--out",
            path(&svg)
        ])),
        1
    );
}

#[test]
fn unknown_controller_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = navbench(&[
        "run",
        "--scenario",
        &sample("open_field"),
        "--controller",
        "astar",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown controller"));
}

#[test]
fn batch_writes_tables_and_logs() {
    let scenarios = tempfile::tempdir().unwrap();
    fs::copy(
        sample("open_field"),
        scenarios.path().join("open_field.json"),
    )
    .unwrap();
    let out_dir = tempfile::tempdir().unwrap();
    let out = navbench(&[
        "batch",
        "--scenarios",
        path(scenarios.path()),
        "--controllers",
        "pid,dwa",
        "--seeds",
        "0..2",
        "--out",
        path(out_dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(out_dir.path().join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 5);
    let summary = fs::read_to_string(out_dir.path().join("summary.csv")).unwrap();
    assert_eq!(
        summary,
        "scenario,controller,runs,success_rate\nopen_field,dwa,2,100.0\nopen_field,pid,2,100.0\n"
    );
    assert_eq!(
        fs::read_dir(out_dir.path().join("logs")).unwrap().count(),
        4
    );
}

#[test]
fn fxcheck_passes() {
    let out = navbench(&["fxcheck", "--cases", "500"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("pid") && text.contains("objective") && text.contains("saturation ok"),
        "{text}"
    );
}
