use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value as Json;

fn iopsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iopsim"))
        .args(args)
        .env_remove("IOPSIM_SEED")
        .output()
        .expect("spawn iopsim")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Json {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn stern_gerlach_reports_equal_branches() {
    let o = iopsim(&["run", "stern-gerlach", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = stdout_json(&o);
    assert_eq!(j["outputs"]["branch_weights"], serde_json::json!([0.5, 0.5]));
    assert_eq!(j["passed"], Json::Bool(true));
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["passed"] == Json::Bool(true)));
}

#[test]
fn cat_with_certain_label() {
    let o = iopsim(&["run", "cat", "--p-plus", "1.0", "--steps", "10", "--json"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    let rows = j["outputs"]["probabilities"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert!((row[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(row[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn two_slit_intensity_array() {
    let o = iopsim(&["run", "two-slit", "--grid", "128", "--slits", "40:44,84:88", "--json"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert_eq!(j["outputs"]["intensity_coherent"].as_array().unwrap().len(), 128);
    let normalised = j["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["description"].as_str().unwrap().contains("normalised"))
        .expect("normalisation check");
    assert_eq!(normalised["passed"], Json::Bool(true));
}

#[test]
fn text_summary_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = iopsim(&["run", "spin-one", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("spin-one: "));
    assert!(text.contains("PASS"));
    let saved: Json = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved["scenario"], "spin-one");
}

#[test]
fn seed_from_environment() {
    let with_flag = iopsim(&["run", "stern-gerlach", "--json", "--seed", "11"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_iopsim"))
        .args(["run", "stern-gerlach", "--json"])
        .env("IOPSIM_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_eq!(stdout_json(&with_flag)["inputs"]["seed"], 11);
}

#[test]
fn failing_check_exits_two() {
    // An impossible tolerance makes the Monte Carlo check fail.
    let o = iopsim(&["run", "stern-gerlach", "--tol", "mc-sigmas=1e-9"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&iopsim(&["run", "dice"])), 1);
    assert_eq!(code(&iopsim(&["run", "cat", "--p-up", "0.5"])), 1);
    assert_eq!(code(&iopsim(&["run", "cat", "--tol", "algebra=0"])), 1);
    assert_eq!(code(&iopsim(&["run", "cat", "--tol", "algebra"])), 1);
    assert_eq!(code(&iopsim(&["run", "cat", "--hbar", "-1"])), 1);
    assert_eq!(code(&iopsim(&["run", "two-slit", "--slits", "10:200"])), 1);
    assert_eq!(code(&iopsim(&["run"])), 1);
    assert_eq!(code(&iopsim(&["frobnicate"])), 1);
    assert_eq!(code(&iopsim(&["validate", "/nonexistent/file.json"])), 1);
}

#[test]
fn help_exits_zero() {
    let o = iopsim(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("selftest"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"scenario": "cat", "params": {"p_plus": 0.3, "steps": 5}, "seed": 3}"#,
    );
    let o = iopsim(&["run", "--config", &cfg, "--steps", "7", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = stdout_json(&o);
    assert_eq!(j["inputs"]["steps"], 7);
    assert_eq!(j["inputs"]["p_plus"], 0.3);

    let bad = write(dir.path(), "bad.json", r#"{"scenario": "cat", "params": {"colour": 1}}"#);
    assert_eq!(code(&iopsim(&["run", "--config", &bad])), 1);
    assert_eq!(code(&iopsim(&["run", "spin-one", "--config", &cfg])), 1);
}

#[test]
fn validate_operator_files() {
    let dir = tempfile::tempdir().unwrap();
    let half = write(dir.path(), "half.json", r#"{"dim": 2, "entries": [[0.5,0],[0,0],[0,0],[0.5,0]]}"#);
    let o = iopsim(&["validate", &half]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("valid"));

    let short = write(dir.path(), "short.json", r#"{"dim": 2, "entries": [[0.5,0],[0,0],[0,0],[0.4,0]]}"#);
    let o = iopsim(&["validate", &short, "--json"]);
    assert_eq!(code(&o), 2);
    let j = stdout_json(&o);
    assert_eq!(j[0]["valid"], Json::Bool(false));
    assert!((j[0]["trace_residual"].as_f64().unwrap() - 0.1).abs() < 1e-12);

    let negative = write(
        dir.path(),
        "negative.json",
        r#"[{"dim": 1, "entries": [[1,0]]}, {"dim": 2, "entries": [[1.1,0],[0,0],[0,0],[-0.1,0]]}]"#,
    );
    let o = iopsim(&["validate", &negative, "--json"]);
    assert_eq!(code(&o), 2);
    let j = stdout_json(&o);
    assert_eq!(j[0]["valid"], Json::Bool(true));
    assert_eq!(j[1]["error"], "NotPositive");

    let garbage = write(dir.path(), "garbage.json", "{not json");
    assert_eq!(code(&iopsim(&["validate", &garbage])), 1);
}

#[test]
fn selftest_small() {
    let o = iopsim(&["selftest", "--cases", "20", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let j = stdout_json(&o);
    assert!(j.as_array().unwrap().iter().all(|s| s["passed"] == Json::Bool(true)));
}
