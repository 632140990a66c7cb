use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.palg")).display().to_string()
}

fn palg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_palg")).args(args).output().expect("palg runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

#[test]
fn validate_countdown() {
    assert_eq!(palg(&["validate", &fixture("cd")]).0, 0);
}

#[test]
fn cycle_duplication_is_refuted_with_counterexample() {
    let (code, out) = palg(&["--json", "equiv", "--kind", "algorithmic", &fixture("cyc_a"), &fixture("cyc_b")]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert!(v["counterexample"]["counterexample"]["kind"].is_string());
}

#[test]
fn swap_is_equivalent_but_not_provable() {
    assert_eq!(palg(&["prove", &fixture("swap_a"), &fixture("swap_b")]).0, 2);
    assert_eq!(palg(&["equiv", &fixture("swap_a"), &fixture("swap_b")]).0, 0);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(palg(&["frobnicate"]).0, 3);
    assert_eq!(palg(&["validate"]).0, 3);
    assert_eq!(palg(&["validate", "/does/not/exist.palg"]).0, 3);
    assert_eq!(palg(&["run", &fixture("cd"), "--input", "9"]).0, 3);
}

#[test]
fn trace_schema() {
    let (code, out) = palg(&["--json", "trace", &fixture("cd"), "--input", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let steps = v.as_array().unwrap();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[0]["kind"], "input");
    assert_eq!(steps[1]["vertex"], "c");
    assert_eq!(steps[5]["kind"], "output");
    assert!(steps[5].get("vertex").is_none());
}

#[test]
fn process_round_trip_through_files() {
    let (code, text) = palg(&["to-process", &fixture("cd")]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("palg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cd_process.palg");
    std::fs::write(&path, text).unwrap();
    let (code, graph) = palg(&["to-graph", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(graph.contains("edge X_c ->1 X_h"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn spinner_run_is_unknown() {
    assert_eq!(palg(&["run", &fixture("spinner"), "--all", "--max-steps", "50"]).0, 2);
}
