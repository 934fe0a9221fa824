use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SMALL: [&str; 8] = ["--grid", "5x5x4", "--samples", "10", "--oracle-samples", "10", "--eps", "0.3"];

fn finsler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsler"))
        .args(args)
        .env_remove("FINSLER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn eval_sphere_reports_unit_curvature() {
    let v = json(&finsler(&["eval", "--metric", "sphere_family", "--eps", "0.5", "--point", "0.3", "0.2", "--dir", "1", "0"]));
    let k = v["report"]["flag_curvature"].as_f64().unwrap();
    assert!((k - 1.0).abs() < 1e-8);
    assert!(v["report"]["s_curvature"].as_f64().unwrap().abs() < 1e-6);
    let got = v["gauss_curvature_alpha"].as_f64().unwrap();
    let want = v["expected_gauss_curvature_alpha"].as_f64().unwrap();
    assert!((got - want).abs() < 1e-9 * want.abs().max(1.0));
}

#[test]
fn eval_funk_in_polar() {
    let v = json(&finsler(&["eval", "--metric", "funk_family", "--eps", "-0.4", "--polar", "0.5", "1.0", "--dir", "0.2", "1"]));
    let f = v["report"]["f"].as_f64().unwrap();
    assert!((v["report"]["flag_curvature"].as_f64().unwrap() + 0.25).abs() < 1e-8);
    assert!((v["s_over_f"].as_f64().unwrap() - 1.5).abs() < 1e-6, "F = {f}");
}

#[test]
fn floats_carry_seventeen_digits() {
    let o = finsler(&["eval", "--metric", "klein_family", "--eps", "0.3", "--point", "0.1", "0.1", "--dir", "0", "1"]);
    let text = stdout(&o);
    assert!(text.contains("\"epsilon\": 2.9999999999999999e-1"), "{text}");
}

#[test]
fn eval_outside_domain_is_an_error() {
    let o = finsler(&["eval", "--metric", "klein_family", "--eps", "0.5", "--point", "0.95", "0", "--dir", "1", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn unknown_metric_is_rejected() {
    let o = finsler(&["eval", "--metric", "torus", "--point", "0", "0", "--dir", "1", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("run.json");
    let mut args = vec!["verify", "--theorem", "3"];
    args.extend(SMALL);
    args.extend(["--out", report.to_str().unwrap()]);
    let o = finsler(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("theorem 3: PASS"));
    let v = read_json(&report);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["config"]["seed"], 1729);

    let o = finsler(&["verify", "--replay", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdicts identical"));
}

#[test]
fn verify_exit_codes() {
    let mut args = vec!["verify", "--theorem", "2", "--tol", "curvature=1e-30"];
    args.extend(SMALL);
    let o = finsler(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_end().ends_with("theorem 2: FAIL"));

    let o = finsler(&["verify", "--theorem", "2", "--grid", "2x2x2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = finsler(&["verify", "--theorem", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[verify]\ntheorem = \"1\"\ngrid = \"5x5x4\"\nsamples = 10\noracle-samples = 10\neps = [0.9]\nseed = 5\n",
    )
    .unwrap();
    let o = finsler(&["--config", cfg.to_str().unwrap(), "verify", "--eps", "0.5", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&report);
    assert_eq!(v["config"]["theorem"], "1");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["epsilons"][0].as_f64(), Some(0.5));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"verify": {"thoerem": "1"}}"#).unwrap();
    let o = finsler(&["--config", bad.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"verify": {"seed": 5}}"#).unwrap();
    let run = |extra: &[&str], env: Option<&str>| -> u64 {
        let report = dir.path().join("s.json");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_finsler"));
        cmd.args(["--config", cfg.to_str().unwrap(), "verify", "--theorem", "1"])
            .args(SMALL)
            .args(extra)
            .args(["--out", report.to_str().unwrap()])
            .env_remove("FINSLER_SEED");
        if let Some(s) = env {
            cmd.env("FINSLER_SEED", s);
        }
        let o = cmd.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        read_json(&report)["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(&[], None), 5);
    assert_eq!(run(&[], Some("11")), 11);
    assert_eq!(run(&["--seed", "13"], Some("11")), 13);
}

#[test]
fn geodesic_csv_conserves_f() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = finsler(&[
        "geodesic", "--metric", "sphere_radial", "--eps", "0.3", "--polar", "1.0", "0.2", "--dir", "0.1", "1",
        "--t-end", "2", "--step", "0.01", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,y1,y2,F"));
    let f: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(f.len(), 201);
    assert!(f.iter().all(|v| (v - f[0]).abs() < 1e-8));
}

#[test]
fn navigate_sphere_domain() {
    let v = json(&finsler(&["navigate", "--background", "round_sphere", "--wind", "rotation", "--eps", "2", "--samples", "20"]));
    let r = v["domain_radius"].as_f64().unwrap();
    assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-12, "{r}");
    assert!(v["max_defining_residual"].as_f64().unwrap() <= 1e-10);
    let searched = v["searched_domain_radius"].as_f64().unwrap();
    assert!((searched - r).abs() < 1e-6);
}

#[test]
fn navigate_funk_matches_closed_form() {
    let v = json(&finsler(&["navigate", "--background", "funk", "--eps", "0.5", "--samples", "20"]));
    assert_eq!(v["closed_form_entry"], "funk_family");
    assert!(v["max_closed_form_disagreement"].as_f64().unwrap() <= 1e-9);
    assert!(v["max_defining_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn navigate_unsolvable_point() {
    let o = finsler(&["navigate", "--background", "klein", "--eps", "2", "--point", "0.8", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
}

#[test]
fn scan_writes_curvature_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = finsler(&["scan", "--metric", "klein_family", "--eps", "0.4", "--grid", "3x4x2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,y1,y2,F,K,S,S_over_F"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 24);
    for r in rows {
        assert!((r[5] + 1.0).abs() < 1e-7 && r[7].abs() < 1e-6);
    }
}
