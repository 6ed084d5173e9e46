use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn certify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certify")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn certificate(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_scenario(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn bnw_exit_codes_follow_verdicts() {
    let out = certify(&["bnw", "--nu", "0"]);
    assert_eq!(code(&out), 10);
    let c = certificate(&out);
    assert_eq!(c["verdict"], "certified-up-to-Tc");
    assert_eq!(c["blew_up"], true);

    let out = certify(&["bnw", "--nu", "8"]);
    assert_eq!(code(&out), 0);
    let c = certificate(&out);
    assert_eq!(c["verdict"], "certified-global");
    assert!(c["envelope"]["A"].as_f64().unwrap() > 0.0);

    let out = certify(&["bnw", "--nu", "68"]);
    assert_eq!(code(&out), 0);
    assert_eq!(certificate(&out)["t1"], 0.0);
}

#[test]
fn short_window_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_scenario(dir.path(), "short.json", r#"{"nu": 3, "control": {"t_max": 0.05}}"#);
    let out = certify(&["run", &s]);
    assert_eq!(code(&out), 20);
    assert_eq!(certificate(&out)["verdict"], "inconclusive");
}

#[test]
fn invalid_scenarios_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_scenario(dir.path(), "bad.json", r#"{"nu": -1}"#);
    let out = certify(&["run", &s]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nu"));
    assert_eq!(code(&certify(&["run", "/nonexistent/scenario.json"])), 1);
}

#[test]
fn run_outputs_are_deterministic_and_feed_figures() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&certify(&["bnw", "--nu", "7", "--out", d.to_str().unwrap()])), 10);
    }
    for f in ["trajectory.csv", "samples.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let c: Value = serde_json::from_str(&std::fs::read_to_string(a.join("certificate.json")).unwrap()).unwrap();
    assert!(c["samples_csv_path"].as_str().unwrap().ends_with("samples.csv"));

    let out = certify(&["figures", a.to_str().unwrap(), "--modes", "1,1,0;0,0,-2"]);
    assert_eq!(code(&out), 0);
    let modes = std::fs::read_to_string(a.join("figure_modes.csv")).unwrap();
    let estimators = std::fs::read_to_string(a.join("figure_estimators.csv")).unwrap();
    assert_eq!(modes.lines().count(), 401);
    assert_eq!(estimators.lines().next().unwrap(), "t,D_n,eps_n,R_n");
    assert!(modes.lines().next().unwrap().starts_with("t,"));
}

#[test]
fn inequality_check_reports_no_violations() {
    let out = certify(&["check-inequalities", "--seed", "5", "--pairs", "20"]);
    assert_eq!(code(&out), 0);
    let r = certificate(&out);
    assert_eq!(r["pairs"], 20);
    assert_eq!(r["basic_violations"], 0);
    assert_eq!(r["kato_violations"], 0);
}

#[test]
fn batch_reports_worst_code() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = write_scenario(dir.path(), "global.json", r#"{"nu": 68}"#);
    let s2 = write_scenario(dir.path(), "blowup.json", r#"{"nu": 3, "horizon": 0.5}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_certify"))
        .args(["run", "--batch", &s1, &s2])
        .env("CERTIFY_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 10);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);

    let bad = write_scenario(dir.path(), "bad.json", r#"{"nu": 1, "n": 2}"#);
    assert_eq!(code(&certify(&["run", "--batch", &s1, &bad])), 1);
}
