use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gnslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnslab"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs a scenario and returns the exit code and the parsed report.
fn run(name: &str, extra: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let scenario = fixture(name);
    let mut args = vec!["run", "--scenario", &scenario, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = gnslab(&args);
    assert!(!stderr(&o).contains("panicked"), "{}", stderr(&o));
    let report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    (o.status.code().unwrap(), report)
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => s.parse().unwrap(),
        _ => panic!("not a number: {v}"),
    }
}

#[test]
fn vectorial_state_on_m2_has_two_dimensional_gns() {
    let (code, report) = run("m2_vectorial_gns.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], "gnslab-report/1");
    let payload = &report["records"][0]["payload"];
    assert_eq!(payload["dim"], 2);
    assert_eq!(payload["gram"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn normalized_qubit_born_rule_is_fair() {
    let (code, _) = run("qubit_born.json", &[]);
    assert_eq!(code, 0);
    // the fixture expects the unnormalized total phi(1) = 2
    let (code, report) = run("qubit_born.json", &["--normalize"]);
    assert_eq!(code, 1);
    let payload = &report["records"][0]["payload"];
    assert!((num(&payload["total"]) - 1.0).abs() < 1e-12);
    let entries = payload["entries"].as_array().unwrap().clone();
    assert_eq!(entries.len(), 2);
    for (e, lambda) in entries.iter().zip([-1.0, 1.0]) {
        assert!((num(&e["eigenvalue"]) - lambda).abs() < 1e-12);
        assert!((num(&e["weight"]) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn non_star_linear_functional_fails_with_witness() {
    let (code, report) = run("not_star_linear.json", &[]);
    assert_eq!(code, 1);
    let rec = &report["records"][0];
    assert_eq!(rec["status"], "error");
    assert_eq!(rec["error"]["kind"], "NotStarLinear");
    // E12 is sent to i but E21 to 0
    assert_eq!(rec["error"]["witness"], 1);
    assert_eq!(report["counts"]["error"], 1);
}

#[test]
fn tour_passes_on_both_backends() {
    let (code, report) = run("tour.json", &[]);
    assert_eq!(code, 0, "{report:#}");
    assert_eq!(report["backend"], "exact");
    let (code, report) = run("tour.json", &["--backend", "float"]);
    assert_eq!(code, 0, "{report:#}");
    assert_eq!(report["backend"], "float");
    assert_eq!(report["counts"]["pass"], report["records"].as_array().unwrap().len());
}

#[test]
fn payloads_are_deterministic() {
    let strip = |mut r: Value| {
        for rec in r["records"].as_array_mut().unwrap() {
            rec.as_object_mut().unwrap().remove("wall_ms");
        }
        serde_json::to_string(&r).unwrap()
    };
    let (_, a) = run("tour.json", &[]);
    let (_, b) = run("tour.json", &[]);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn uniform_tolerance_flag_is_reported() {
    let (_, report) = run("float_qubit.json", &["--tol", "1e-7"]);
    for key in ["rank_tol", "psd_tol", "spec_tol"] {
        assert_eq!(report["tolerances"][key], 1e-7);
    }
}

#[test]
fn human_summary_goes_to_stdout() {
    let o = gnslab(&["run", "--scenario", &fixture("m2_vectorial_gns.json")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[PASS] gns of e1"), "{text}");
    assert!(text.contains("1 passed, 0 failed, 0 errors"));
}

#[test]
fn validate_accepts_shipped_scenarios() {
    for name in ["tour.json", "m2_vectorial_gns.json", "qubit_born.json", "float_qubit.json", "not_star_linear.json"] {
        let o = gnslab(&["validate", "--scenario", &fixture(name)]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
    }
}

#[test]
fn validate_names_a_dangling_reference() {
    let o = gnslab(&["validate", "--scenario", &fixture("dangling.json")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.contains("\"psi\""));
}

#[test]
fn validate_flags_exact_scalars_in_float_scenarios() {
    let o = gnslab(&["validate", "--scenario", &fixture("backend_mismatch.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("exact scalar in a float scenario"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    for sub in ["run", "validate"] {
        let o = gnslab(&[sub, "--scenario", &fixture("syntax_error.json")]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("line 5, column"), "{}", stderr(&o));
    }
}

#[test]
fn run_refuses_invalid_scenarios() {
    let o = gnslab(&["run", "--scenario", &fixture("dangling.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = gnslab(&["run", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_fixture_runs_without_panicking() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = gnslab(&["run", "--scenario", path.to_str().unwrap()]);
        let code = o.status.code().expect("exited normally");
        assert!((0..=2).contains(&code), "{}", path.display());
        assert!(!stderr(&o).contains("panicked"), "{}", path.display());
    }
}

#[test]
fn suite_only_runs_one_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("suite{k}.json"));
        let o = gnslab(&["suite", "--only", "gelfand", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stdout(&o));
        let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        reports.push(r);
    }
    for r in &reports {
        assert_eq!(r["kind"], "suite");
        assert_eq!(r["seed"], 42);
        assert_eq!(r["suites"].as_array().unwrap().len(), 1);
        assert_eq!(r["suites"][0]["name"], "gelfand");
    }
    assert_eq!(reports[0]["suites"][0]["passed"], reports[1]["suites"][0]["passed"]);
    assert_eq!(reports[0]["suites"][0]["instances"], 100);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = gnslab(&["suite", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
