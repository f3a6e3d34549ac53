use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ordlab(dir: &Path, config: &str, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordlab"));
    cmd.arg("--config").arg(&path).args(args).env_remove("ORDLAB_BALL_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn exit_codes_of_the_worked_examples() {
    let dir = TempDir::new().unwrap();
    let out = ordlab(dir.path(), r#"{"task": "refute-lo", "group": {"kind": "finite_cyclic", "modulus": 5}, "r_max": 2}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(1));
    let rep = report(&out);
    assert_eq!(rep["verdict"], "not_left_orderable");
    assert_eq!(rep["result"]["certificate_verified"], true);

    let out = ordlab(dir.path(), r#"{"task": "enumerate-orders", "group": {"kind": "klein_bottle"}, "r": 2}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["count"], 4);

    let out = ordlab(dir.path(), r#"{"task": "counterexample"}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(1));
    let cert = &report(&out)["result"]["certificate"];
    assert_eq!(cert["v"], serde_json::json!([1, -3]));
    assert_eq!(cert["t_matrix"], serde_json::json!([[5, 2], [2, 1]]));
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    for config in [
        r#"{"task": "counterexample"}"#,
        r#"{"task": "poincare", "random_systems": {"count": 5, "max_points": 20}}"#,
        r#"{"task": "check-conradian", "group": {"kind": "klein_bottle"}, "order": {"kind": "klein_lex", "parameters": {}}}"#,
    ] {
        let a = ordlab(dir.path(), config, &["--workers", "2"], &[]);
        let b = ordlab(dir.path(), config, &[], &[]);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{config}");
    }
}

#[test]
fn seed_is_recorded_and_changes_random_systems() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"task": "poincare", "random_systems": {"count": 3, "max_points": 30}}"#;
    let a = report(&ordlab(dir.path(), config, &["--seed", "1"], &[]));
    let b = report(&ordlab(dir.path(), config, &["--seed", "2"], &[]));
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    assert_ne!(a["result"], b["result"]);
}

#[test]
fn schema_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let out = ordlab(dir.path(), r#"{"task": "enumerate-orders", "group": {"kind": "free_abelian", "rank": 2}, "r": "x"}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at r:"));
    let out = ordlab(dir.path(), r#"{"task": "enumerate-orders", "group": {"kind": "free_abelian", "rank": 2}, "radius": 2}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(3));
    let out = ordlab(dir.path(), r#"{"task": "open-set", "group": {"kind": "free_abelian", "rank": 2}, "r": 2}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain"));
}

#[test]
fn ball_cap_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"task": "enumerate-orders", "group": {"kind": "free_abelian", "rank": 2}, "r": 3}"#;
    let out = ordlab(dir.path(), config, &[], &[("ORDLAB_BALL_CAP", "10")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let out = ordlab(dir.path(), config, &[], &[("ORDLAB_BALL_CAP", "1000")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["ball_cap"], 1000);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = ordlab(
        dir.path(),
        r#"{"task": "indicable", "presentation": {"generators": 2, "relators": [[1, 2, -1, -2]]}}"#,
        &["--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep["tool"]["name"], "ordlab");
    assert_eq!(rep["task"]["task"], "indicable");
}

#[test]
fn identity_t_is_rejected_as_usage() {
    let dir = TempDir::new().unwrap();
    let out = ordlab(dir.path(), r#"{"task": "counterexample", "t_word": []}"#, &[], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("is_hyperbolic"));
}
