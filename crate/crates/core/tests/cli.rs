use std::path::PathBuf;

use orlicz_core::cli::{run_with, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS};
use orlicz_core::solve::ls_slope;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["orlicz-lab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn norm_of_unit_box() {
    let (code, out, _) = run(&["norm", "--young", "p2", "--fn", "box01"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "1.0");
}

#[test]
fn parametric_and_amemiya_norms() {
    // ∫(1/k)² ≤ 4 on [0,1) gives k = 1/2
    let (_, out, _) = run(&["norm", "--young", "p2", "--fn", "box01", "--target", "4"]);
    assert_eq!(out.trim(), "0.5");
    // inf (1 + k²)/k = 2
    let (_, out, _) = run(&["norm", "--young", "p2", "--fn", "box01", "--amemiya"]);
    assert_eq!(out.trim(), "2.0");
}

#[test]
fn catalog_lists_required_names() {
    let (code, out, _) = run(&["catalog"]);
    assert_eq!(code, EXIT_OK);
    for name in ["p1", "p4over3", "p2", "p3", "xlog", "cosh", "exp", "phi_s", "phi_b"] {
        assert!(out.lines().any(|l| l.split('\t').next() == Some(name)), "{name} missing");
    }
    let (_, json, _) = run(&["catalog", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(rows.as_array().unwrap().len() >= 9);
}

#[test]
fn conjugate_of_square() {
    let (code, out, _) = run(&["conjugate", "--young", "p2", "--y", "2,4"]);
    assert_eq!(code, EXIT_OK);
    let vals: Vec<&str> = out.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(vals, ["1.0", "4.0"]);
}

#[test]
fn amalgam_of_box_in_l2() {
    let (code, out, _) = run(&["amalgam", "--fn", "box01", "--phi1", "p2", "--phi2", "p2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("discrete\t1.0"), "{out}");
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [&["bogus"][..], &["norm", "--young", "p2", "--fn", "box01", "--target", "abc"], &["norm", "--young", "nope", "--fn", "box01"]] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    }
}

#[test]
fn missing_config_is_an_io_error() {
    let (code, _, err) = run(&["verify", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("/nonexistent/cfg.json"));
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"young_functions": ["nope"]}"#).unwrap();
    let (code, _, _) = run(&["verify", "--config", p.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn dilation_scan_slope() {
    let (code, out, _) = run(&["dilation-scan", "--p", "2", "--q", "2"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("lambda,norm,log_lambda,log_norm"));
    let (xs, ys): (Vec<f64>, Vec<f64>) = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .filter(|r| r[0] <= 1.0)
        .map(|r| (r[2], r[3]))
        .unzip();
    assert!((ls_slope(&xs, &ys) + 0.5).abs() <= 0.05);
}

#[test]
fn zak_csv_and_demo() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["zak", "--fn", "box01", "-k", "4", "-n", "16", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let csv = std::fs::read_to_string(dir.path().join("zak.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 16 * 16);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",1")));

    let (code, out, _) = run(&["zak", "--balian-low"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verdict: degenerate"));
    assert!(out.contains("cannot be a Riesz basis"));
}

#[test]
fn verify_default_is_clean_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (code, out, _) = run(&["verify", "--config", &config("default.json"), "--out", a.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("violated=0"));
    run(&["verify", "--config", &config("default.json"), "--out", b.to_str().unwrap(), "--jobs", "2"]);
    for f in ["report.json", "report.csv", "plot_data.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    let count = |s: &str| records.iter().filter(|r| r["status"] == s).count() as u64;
    for s in ["verified", "violated", "report_only", "not_applicable"] {
        assert_eq!(report["summary"][s].as_u64().unwrap(), count(s), "{s}");
    }
    let csv = std::fs::read_to_string(a.join("report.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("id,module,lambda,lhs,bound,slack,status"));
    assert_eq!(csv.lines().count(), records.len() + 1);
    // the p > q tension case is reported, never checked
    assert!(records
        .iter()
        .filter(|r| r["id"] == "dilation_main" && r["inputs"]["pair"] == "p3|p2")
        .all(|r| r["status"] == "report_only" && r["slack"].is_number()));
}

#[test]
fn verify_with_phi_b_lemma_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["verify", "--config", &config("full_lemma.json"), "--out", dir.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, EXIT_VIOLATIONS);
    assert!(!out.contains("violated=0"));
    assert!(dir.path().join("report.csv").exists());
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn seed_override_changes_hash() {
    let dir = tempfile::tempdir().unwrap();
    let hash = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        run(&["verify", "--seed", seed, "--out", out.to_str().unwrap(), "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
        v["config_hash"].as_str().unwrap().to_string()
    };
    assert_ne!(hash("7", "x"), hash("8", "y"));
}
