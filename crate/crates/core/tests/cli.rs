use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bloch-poincare");

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EVOLVE: &str = r#"{"parameters": {
    "initial": [[1, 0], [0, 0]],
    "target": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
    "energy": 1.0, "samples": 101 }}"#;

#[test]
fn evolve_csv_reaches_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = run(&["evolve", "--format", "csv", "--output", path_arg(&out)], EVOLVE);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re_c0,im_c0,re_c1,im_c1,bx,by,bz,fidelity");
    assert_eq!(lines.len(), 102);
    let last: Vec<f64> = lines[101].split(',').map(|x| x.parse().unwrap()).collect();
    assert!(last[8] >= 1.0 - 1e-9);
    assert!((last[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn optimize_coherence_json() {
    let o = run(
        &["optimize-coherence"],
        r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0]}}"#,
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["solution"]["phi_opt"].as_f64().unwrap() + std::f64::consts::FRAC_PI_8).abs() < 1e-7);
    assert!((v["solution"]["j_after"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["ledger"]["s1_sq_after"].as_f64().unwrap() < 1e-20);
}

#[test]
fn malformed_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    for bad in ["{\"parameters\": ", r#"{"parameters": {"jxx": "three"}}"#] {
        let o = run(&["optimize-coherence", "--output", path_arg(&out)], bad);
        assert_eq!(o.status.code(), Some(65), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists());
    }
    let o = run(&["mueller", "--output", path_arg(&out)], EVOLVE);
    assert_eq!(o.status.code(), Some(65));
    assert!(!out.exists());
}

#[test]
fn numerical_gate_has_its_own_code() {
    let same = r#"{"parameters": {"initial": [[1, 0], [0, 0]], "target": [[0, 1], [0, 0]], "energy": 1}}"#;
    let o = run(&["evolve"], same);
    assert_eq!(o.status.code(), Some(70));
    let unpolarized = r#"{"parameters": {"jxx": 1, "jyy": 1, "jxy": [0, 0]}}"#;
    assert_eq!(run(&["optimize-coherence"], unpolarized).status.code(), Some(70));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = run(
        &["optimize-coherence", "--output", "/nonexistent-dir/x/out.json"],
        r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0]}}"#,
    );
    assert_eq!(o.status.code(), Some(74));
}

#[test]
fn config_file_and_degrees_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0], "rotation": -22.5}}"#).unwrap();
    let o = run(&["optimize-coherence", "--config", path_arg(&cfg), "--degrees"], "");
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["applied_rotation"].as_f64().unwrap() + std::f64::consts::FRAC_PI_8).abs() < 1e-15);
}

#[test]
fn outputs_are_byte_identical() {
    let cfg = r#"{"parameters": {
        "initial": [[1, 0], [0, 0]], "target": [[0.6, 0.1], [0.2, -0.7]],
        "energy": 0.8, "jxx": 3, "jyy": 1, "jxy": [1, 0.2] }}"#;
    let a = run(&["correspondence"], cfg);
    let b = run(&["correspondence"], cfg);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report"]["rows"].as_array().unwrap().len(), 7);
    assert_eq!(v["report"]["all_pass"], true);
}

#[test]
fn mueller_and_interference_csv() {
    let o = run(
        &["mueller", "--format", "csv", "--seed", "7"],
        r#"{"parameters": {"jones": [[[0.7071067811865476, 0], [0.7071067811865476, 0]], [[-0.7071067811865476, 0], [0.7071067811865476, 0]]]}}"#,
    );
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("row,m0,m1,m2,m3\n"));

    let o = run(
        &["interference", "--format", "csv"],
        r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0],
            "theta": [0.7853981633974483], "epsilon": {"start": 0, "stop": 3.141592653589793, "count": 3}}}"#,
    );
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[2] - 3.0).abs() < 1e-12);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn batch_runs_each_entry() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.json");
    let cfg = format!(
        r#"{{"scenarios": [
            {{"kind": "evolve", "parameters": {{"initial": [[1,0],[0,0]], "target": [[0,0],[1,0]], "energy": 2}},
              "output": {{"path": {:?}, "format": "csv"}}}},
            {{"kind": "optimize_coherence", "parameters": {{"jxx": 1, "jyy": 0, "jxy": [0,0]}},
              "output": {{"path": {:?}}}}}
        ]}}"#,
        a.display().to_string(),
        b.display().to_string()
    );
    let o = run(&["batch"], &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&a).unwrap().lines().count(), 102);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert!((v["solution"]["phi_opt"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}
