//! End-to-end checks of the compiled binary: exit codes, output shape,
//! and file emission.

use std::process::Command;

fn vendinfo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vendinfo"))
}

#[test]
fn solve_bundled_instance_emits_csv() {
    let out = vendinfo()
        .args(["solve", "zs_lossless", "--restarts", "4"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# instance: zs_lossless\n"), "{text}");
    assert!(text.contains("# config: sha256:"));
    assert!(text.lines().any(|l| l.starts_with("d,c,")), "missing column header: {text}");
}

#[test]
fn solve_writes_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    let out = vendinfo()
        .args([
            "solve",
            "observe_or_not_identity",
            "--restarts",
            "4",
            "--format",
            "json",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["instance"], "observe_or_not_identity");
    assert!(parsed["rows"].as_array().is_some_and(|r| !r.is_empty()));
}

#[test]
fn grid_overrides_change_the_row_count() {
    let out = vendinfo()
        .args(["solve", "zs_cost", "--restarts", "4", "--c", "0.0:0.5:3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data_rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty() && l.chars().next().unwrap().is_ascii_digit())
        .count();
    assert_eq!(data_rows, 3, "{text}");
}

#[test]
fn malformed_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = vendinfo().arg("solve").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn unknown_instance_exits_with_code_two() {
    let out = vendinfo().args(["solve", "no_such_thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_emission_has_expected_columns() {
    let out = vendinfo().args(["figure", "fig7"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("d,rate_c0,rate_c0.3,rate_c0.6,rate_c1"), "{text}");
}
