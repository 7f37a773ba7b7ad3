use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use antihorn_core::world::generate_world;
use antihorn_core::Poly;

fn antihorn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antihorn"))
        .args(args)
        .env_remove("ANTIHORN_OUT_DIR")
        .output()
        .expect("spawn antihorn")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("antihorn-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn zero_worlds_is_an_empty_success() {
    let dir = scratch("zero");
    let out = antihorn(&["learn", "--worlds", "0", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = std::fs::read_to_string(dir.join("learn-report.json")).unwrap();
    assert!(json.contains("\"worlds\": 0"));
    assert!(stdout(&out).contains("result: PASS"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn small_learn_run_passes() {
    let out = antihorn(&[
        "learn", "--worlds", "12", "--k", "3", "--n-max", "5", "--seed", "3",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("12/12 worlds passed"));
}

#[test]
fn corrupted_world_rejected_at_load() {
    let dir = scratch("corrupt");
    let world = generate_world(1, 1, 3, Poly::constant(2), Poly::linear(1), 1.0).unwrap();
    let mut scenario = world.to_scenario();
    scenario.s = ["0", "1", "01"]
        .iter()
        .map(|w| w.parse().unwrap())
        .collect();
    let path = dir.join("world.json");
    std::fs::write(&path, scenario.to_json()).unwrap();
    let out = antihorn(&["learn", "--world", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("census"), "{}", stderr(&out));

    world.save(&path).unwrap();
    let out = antihorn(&["learn", "--world", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("1/1 worlds passed"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn forced_m_too_small_is_rejected() {
    let out = antihorn(&["recover", "--m", "2", "--vars", "6", "--formulas", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("forced m = 2"), "{}", stderr(&out));
}

#[test]
fn recover_with_unsat_mix() {
    let out = antihorn(&[
        "recover",
        "--formulas",
        "10",
        "--vars",
        "3",
        "--include-unsat",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(
        stdout(&out).contains("9/10 agreed, 1 unsat detected"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn transform_run() {
    let out = antihorn(&["transform", "--instances", "50", "--k", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("50 instances"));
}

#[test]
fn out_dir_from_environment_and_config_file_override() {
    let dir = scratch("env");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "instances = 7\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_antihorn"))
        .args([
            "transform",
            "--instances",
            "3",
            "--config",
            cfg.to_str().unwrap(),
        ])
        .env("ANTIHORN_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = std::fs::read_to_string(dir.join("transform-summary.txt")).unwrap();
    assert!(summary.contains("7 instances"), "{summary}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn identical_runs_write_identical_reports() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for dir in [&a, &b] {
        let out = antihorn(&[
            "learn",
            "--worlds",
            "8",
            "--n-max",
            "4",
            "-v",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(&a, "learn-report.json"), read(&b, "learn-report.json"));
    assert_eq!(read(&a, "learn-summary.txt"), read(&b, "learn-summary.txt"));
    std::fs::remove_dir_all(a).unwrap();
    std::fs::remove_dir_all(b).unwrap();
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(antihorn(&["learn", "--k", "5"]).status.code(), Some(2));
    assert_eq!(
        antihorn(&["learn", "--density", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(antihorn(&["frobnicate"]).status.code(), Some(2));
}
