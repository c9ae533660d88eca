//! End-to-end checks of the binary: exit codes, config handling, report
//! rendering, and byte-identical reports across worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistzhu"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("twistzhu-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn identities_pass_with_exit_zero() {
    let out = run(&["identities", "--lmax", "4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("identities: pass"));
}

#[test]
fn usage_errors_exit_64() {
    // negative lmax
    let out = run(&["identities", "--lmax", "-1"]);
    assert_eq!(out.status.code(), Some(64));
    // unknown suite
    let out = run(&["verify", "--suite", "nonsense", "--aut", "theta", "--n", "0", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(64));
    // malformed level
    let out = run(&["build", "--aut", "theta", "--n", "x/y", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(64));
    // level outside the lattice
    let out = run(&["build", "--aut", "theta", "--n", "1/3", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(64));
    // unknown automorphism
    let out = run(&["build", "--aut", "sigma", "--n", "0", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(64));
    // unknown subcommand / missing args
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn cutoff_overflow_exits_3() {
    // membership scans demand products that cannot fit a cutoff this small
    let out = run(&[
        "verify", "--suite", "membership", "--aut", "id", "--n", "1", "--cutoff", "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn build_writes_report() {
    let path = tmp("build.json");
    let out = run(&[
        "build", "--aut", "theta", "--n", "0", "--cutoff", "6", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"schema\": \"twistzhu-report/1\""));
    assert!(text.contains("\"dim_upper\""));
    // render it back as a table
    let out = run(&["report", "--in", path.to_str().unwrap(), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("build g=theta"));
    let out = run(&["report", "--in", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(&path).ok();
}

#[test]
fn config_file_with_flag_override() {
    let cfg_path = tmp("config.json");
    std::fs::write(
        &cfg_path,
        r#"{"aut": "theta", "n": "l=0,i=1,T=2", "cutoff": 4, "suites": ["zhu-assoc"], "seed": 3}"#,
    )
    .unwrap();
    // flag overrides the config cutoff
    let out = run(&[
        "verify", "--config", cfg_path.to_str().unwrap(), "--cutoff", "6",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("zhu-assoc: pass"));
    std::fs::remove_file(&cfg_path).ok();
}

#[test]
fn reports_identical_across_worker_counts() {
    let p1 = tmp("t1.json");
    let p8 = tmp("t8.json");
    for (threads, path) in [("1", &p1), ("8", &p8)] {
        let out = run(&[
            "verify", "--suite", "zhu-assoc", "--suite", "phi", "--aut", "theta", "--n",
            "1/2", "--cutoff", "6", "--seed", "9", "--threads", threads, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let strip = |p: &PathBuf| {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string_pretty(&v).unwrap()
    };
    assert_eq!(strip(&p1), strip(&p8), "reports differ across worker counts");
    std::fs::remove_file(&p1).ok();
    std::fs::remove_file(&p8).ok();
}
