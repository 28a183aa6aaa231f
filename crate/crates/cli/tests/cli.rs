use std::process::Command;

use serde_json::Value;

fn curvflow(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_curvflow")).args(args).output().unwrap()
}

fn error_json(out: &std::process::Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"mc3d": {"v_kapa": 1.0}}"#).unwrap();
    let out = curvflow(&["mc3d", "--config", cfg.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["kind"], "usage");
    assert_eq!(err["key"], "mc3d.v_kapa");
}

#[test]
fn missing_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvflow(&["mc3d", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["key"], "seed");
}

#[test]
fn engine_errors_carry_their_kind() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvflow(&["flow2d", "--out", dir.path().to_str().unwrap(), "--eps", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_json(&out)["kind"], "domain");
    let out = curvflow(&["flow2d", "--out", dir.path().to_str().unwrap(), "--m", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["key"], "flow2d.m");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out_dir = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"seed": 5, "out": {:?}, "mc3d": {{"n": 20000, "sampler": "skewed", "v_kappa": -1.0}}}}"#,
            out_dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = curvflow(&["mc3d", "--config", cfg.to_str().unwrap(), "--n", "50000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("mc3d.json")).unwrap()).unwrap();
    assert_eq!(doc["seed"], 5);
    assert_eq!(doc["estimate"]["n"], 50000);
    assert_eq!(doc["estimate"]["sampler"], "skewed");
    assert!(doc["estimate"]["mean"].as_f64().unwrap() < 0.0);
}

#[test]
fn flow_and_report_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = curvflow(&["flow2d", "--out", out, "--m", "512", "--t-end", "0.12"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let events = std::fs::read_to_string(dir.path().join("flow2d_events.csv")).unwrap();
    let rows: Vec<&str> = events.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains(",annihilation,1,1,")));
    let samples = std::fs::read_to_string(dir.path().join("flow2d_samples.csv")).unwrap();
    assert!(samples.starts_with("t,N,area,R_min\n"));
    // 17 significant digits in scientific notation.
    let t = samples.lines().nth(2).unwrap().split(',').next().unwrap();
    assert_eq!(t.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);

    let report = curvflow(&["report", "--out", out]);
    assert!(report.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(doc["flow2d"]["annihilations"], 2);
}

#[test]
fn report_without_artifacts_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvflow(&["report", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["key"], "out");
}
