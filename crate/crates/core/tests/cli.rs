//! Exit-code and artifact behavior of the command-line binary.

use std::process::Command;

fn pgcache() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pgcache"))
}

#[test]
fn params_prints_expected_numbers() {
    let out = pgcache()
        .args(["params", "-q", "2", "-k", "4", "-m", "1", "-t", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["broadcast"]["users"], "105");
    assert_eq!(v["broadcast"]["rate_approx"], 8.0);
    assert_eq!(v["broadcast"]["gain"], 6);
    assert_eq!(v["d2d"]["subpacketization"], "525");
    assert_eq!(v["d2d"]["rate_approx"], 9.6);
}

#[test]
fn usage_errors_exit_2() {
    let out = pgcache().args(["params", "-q", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = pgcache().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn broken_pda_fails_verification_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.csv");
    // Label 1 twice in the same row violates C3(1).
    std::fs::write(&path, "3,2\n1,1,*\n*,*,2\n").unwrap();
    let out = pgcache()
        .arg("verify")
        .arg("--pda")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    let failures = v["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().contains("C3(1)")
        && f.as_str().unwrap().contains("(0,0)")));
}

#[test]
fn verify_constructed_instance_passes() {
    let out = pgcache()
        .args(["verify", "-q", "2", "-k", "4", "-m", "1", "-t", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["closed_forms_match"], true);
}

#[test]
fn vertex_cap_env_var_is_honored() {
    let out = pgcache()
        .args(["verify", "-q", "2", "-k", "4", "-m", "1", "-t", "1"])
        .env("PGCACHE_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("instance too large"), "{err}");
}

#[test]
fn simulate_writes_report_without_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pgcache()
        .args([
            "simulate", "-q", "2", "-k", "4", "-m", "1", "-t", "1", "--mode", "d2d",
            "--seed", "7", "-o",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["decoded_ok"], true);
    assert_eq!(v["measured_rate"], 9.6);
    assert!(v.get("runtime_ms").is_none());
}

#[test]
fn build_then_verify_and_simulate_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = pgcache()
        .args(["build", "-q", "2", "-k", "4", "-m", "1", "-t", "1", "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    for f in ["linegraph.json", "pda.csv", "pda.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let verify = pgcache()
        .arg("verify")
        .arg("--pda")
        .arg(dir.path().join("pda.csv"))
        .output()
        .unwrap();
    assert!(verify.status.success());
    let sim = pgcache()
        .arg("simulate")
        .arg("--pda")
        .arg(dir.path().join("pda.csv"))
        .args(["--mode", "broadcast", "--seed", "1"])
        .output()
        .unwrap();
    assert!(sim.status.success());
    let v: serde_json::Value = serde_json::from_slice(&sim.stdout).unwrap();
    assert_eq!(v["measured_rate"], 8.0);
}

#[test]
fn table_and_bounds_and_sweep_run_clean() {
    for args in [
        vec!["table", "--which", "1"],
        vec!["table", "--which", "2"],
        vec!["bounds", "-q", "2", "-k", "5", "-m", "1", "-t", "1"],
        vec!["sweep", "--max-q", "3", "--max-k", "6", "--format", "csv"],
        vec![
            "sweep",
            "--target-users",
            "100",
            "--target-fraction",
            "3/5",
        ],
    ] {
        let out = pgcache().args(&args).output().unwrap();
        assert!(out.status.success(), "{args:?} failed: {out:?}");
    }
}
