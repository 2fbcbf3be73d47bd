use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn immerse(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immerse"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn pipeline_certificate(dir: &Path) {
    assert_eq!(code(&immerse(&["gen", "complete", "12", "-o", "k12.txt"], dir)), 0);
    let run = immerse(&["immerse", "k12.txt", "-t", "3", "-o", "cert.json", "--report", "report.txt"], dir);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
}

#[test]
fn verify_accepts_pipeline_certificate() {
    let dir = tempfile::tempdir().unwrap();
    pipeline_certificate(dir.path());
    let out = immerse(&["verify", "k12.txt", "cert.json"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("valid"));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("dense-to-complete"));
}

#[test]
fn verify_rejects_swapped_edge() {
    let dir = tempfile::tempdir().unwrap();
    pipeline_certificate(dir.path());
    let path = dir.path().join("cert.json");
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let trails = cert["trails"].as_array_mut().unwrap();
    let other = trails[1]["host_edges"][0].clone();
    trails[0]["host_edges"][0] = other;
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = immerse(&["verify", "k12.txt", "cert.json"], dir.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn directed_cycle_is_not_dense_enough() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&immerse(&["gen", "circulant", "8", "1", "-o", "c8.txt"], dir.path())), 0);
    let out = immerse(&["immerse", "c8.txt", "-t", "2"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn paper_profile_refuses_desk_scale() {
    let dir = tempfile::tempdir().unwrap();
    immerse(&["gen", "complete", "12", "-o", "k12.txt"], dir.path());
    let out = immerse(&["immerse", "k12.txt", "-t", "2", "--profile", "paper"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&immerse(&["frobnicate"], dir.path())), 3);
    assert_eq!(code(&immerse(&["verify", "missing.txt", "missing.json"], dir.path())), 3);
    std::fs::write(dir.path().join("bad.txt"), "3 2\n0 1\n").unwrap();
    assert_eq!(code(&immerse(&["immerse", "bad.txt", "-t", "2"], dir.path())), 3);
}

#[test]
fn generator_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = immerse(&["gen", "random-eulerian", "15", "4", "--seed", "9"], dir.path());
    let b = immerse(&["gen", "random-eulerian", "15", "4", "--seed", "9"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cycle_tools_run() {
    let dir = tempfile::tempdir().unwrap();
    immerse(&["gen", "complete", "6", "-o", "k6.txt"], dir.path());
    for op in ["short", "few-simple", "pack"] {
        let out = immerse(&["cycles", "k6.txt", "--op", op, "--alpha", "0.5"], dir.path());
        assert_eq!(code(&out), 0, "{op}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v.is_object());
    }
}
