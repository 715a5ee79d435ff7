use std::path::PathBuf;
use std::process::{Command, Output};

fn kahlerflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kahlerflow")).args(args).env("KAHLERFLOW_THREADS", "2").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("kahlerflow-cli-{name}-{}", std::process::id()));
    std::fs::remove_dir_all(&d).ok();
    d
}

#[test]
fn passing_suite_exits_zero_and_writes_reports() {
    let dir = scratch("pass");
    let out = kahlerflow(&["verify", "kahler", "--tau", "0,1", "--sigma", "1,1", "--format", "csv", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(csv.lines().count(), records.len() + 1);
    assert!(csv.starts_with("suite,test,param_json,value_re,value_im,ref_re,ref_im,provenance,abs_err,pass\n"));
    assert_eq!(json["summary"]["failed"], 0);
    assert!(records.iter().all(|r| r.get("runtime_ms").is_none()));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_goes_to_stdout() {
    let out = kahlerflow(&["verify", "mixed", "--sigma", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("report mixed"));
    assert!(text.contains("[mixed]"));
}

#[test]
fn failures_exit_one() {
    let dir = scratch("fail");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("tight.json");
    std::fs::write(&cfg, r#"{"f0": 1.0, "tolerances": {"potential_fd": 1e-16}}"#).unwrap();
    let out = kahlerflow(&["verify", "kahler", "--config", cfg.to_str().unwrap(), "--tau", "0,1", "--sigma", "0,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["summary"]["failed"].as_u64().unwrap() >= 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["verify", "kahler", "--tau", "1,0"],
        vec!["verify", "mixed", "--sigma", "oops"],
        vec!["verify", "nonsense"],
        vec!["verify", "flows", "--config", "/nonexistent/config.json"],
        vec!["verify", "cst-unitarity", "--lambda-max", "0.7"],
    ] {
        let out = kahlerflow(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
    }
}

#[test]
fn timings_are_opt_in() {
    let out = kahlerflow(&["verify", "kahler", "--tau", "0,1", "--sigma", "0,0", "--format", "json", "--timings"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["records"].as_array().unwrap().iter().all(|r| r["runtime_ms"].is_number()));
}
