use std::path::Path;
use std::process::{Command, Output};

fn etnckit(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_etnckit"));
    cmd.args(args).env_remove("ETNCKIT_BUDGET_TERMS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().file_name().into_string().unwrap()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn list_checks() {
    let out = etnckit(&["--list-checks"], &[]);
    assert!(out.status.success());
    let names = String::from_utf8(out.stdout).unwrap();
    assert_eq!(names.lines().count(), 11);
    assert!(names.lines().any(|l| l == "functional_eq"));
}

#[test]
fn empty_spec_succeeds_with_no_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "s.json", r#"{"jobs": []}"#);
    let out_dir = tmp.path().join("out");
    let out = etnckit(&["--spec", &spec, "--out", out_dir.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(files(&out_dir).is_empty());
}

#[test]
fn single_job_report() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "s.json", r#"{"jobs": [{"check": "dh_generalized", "params": {"p": 3, "r": 2, "n": 2}, "seed": 7}]}"#);
    let out_dir = tmp.path().join("out");
    let out = etnckit(&["--spec", &spec, "--out", out_dir.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(files(&out_dir), vec!["dh_generalized-7.json"]);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("dh_generalized-7.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["failures"], 0);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "bad.json", "{\"jobs\": [\n  {\"check\": \"gauss\",, }\n]}");
    let out = etnckit(&["--spec", &spec, "--out", tmp.path().join("o").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");

    let spec = write(tmp.path(), "unknown.json", r#"{"jobs": [{"check": "nonsense"}]}"#);
    assert_eq!(etnckit(&["--spec", &spec], &[]).status.code(), Some(2));

    let spec = write(tmp.path(), "bad.toml", "[[jobs]]\ncheck = \"gauss\"\nseed = \"x\"\n");
    assert_eq!(etnckit(&["--spec", &spec], &[]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "s.json",
        r#"{"jobs": [
            {"check": "euler_identities", "params": {"instances": 20}, "seed": 3},
            {"check": "pairing", "params": {"triples": 10}, "seed": 4},
            {"check": "gauss", "params": {"moduli": [5, 9]}}
        ]}"#,
    );
    let mut bodies = Vec::new();
    for jobs in ["1", "4"] {
        let out_dir = tmp.path().join(format!("out{jobs}"));
        let out = etnckit(&["--spec", &spec, "--out", out_dir.to_str().unwrap(), "--jobs", jobs], &[]);
        assert_eq!(out.status.code(), Some(0));
        let names = files(&out_dir);
        assert_eq!(names, vec!["euler_identities-3.json", "gauss-0.json", "pairing-4.json"]);
        bodies.push(names.iter().map(|n| std::fs::read(out_dir.join(n)).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn seed_override_and_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "s.toml", "[[jobs]]\ncheck = \"det_signs\"\nseed = 1\n[jobs.params]\ninstances = 5\n");
    let out_dir = tmp.path().join("out");
    let out = etnckit(&["--spec", &spec, "--out", out_dir.to_str().unwrap(), "--format", "csv", "--seed-override", "99"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(files(&out_dir), vec!["det_signs-99.csv"]);
    let csv = std::fs::read_to_string(out_dir.join("det_signs-99.csv")).unwrap();
    assert!(csv.starts_with("key,value\n"));
    assert!(csv.contains("status,pass\n"));
}

#[test]
fn budget_skip_only_fails_under_strict() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(tmp.path(), "s.json", r#"{"jobs": [{"check": "functional_eq", "params": {"max_conductor": 12}}]}"#);
    let out_dir = tmp.path().join("out");
    let dir = out_dir.to_str().unwrap();
    let relaxed = etnckit(&["--spec", &spec, "--out", dir], &[("ETNCKIT_BUDGET_TERMS", "1")]);
    assert_eq!(relaxed.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("functional_eq-0.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "skipped: budget");
    let strict = etnckit(&["--spec", &spec, "--out", dir, "--strict"], &[("ETNCKIT_BUDGET_TERMS", "1")]);
    assert_eq!(strict.status.code(), Some(1));
}
