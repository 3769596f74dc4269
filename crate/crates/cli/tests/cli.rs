//! End-to-end checks of the binary: exit codes, output hashing, and
//! cross-run determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn hmu() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hmu"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

const GOOD_CONFIG: &str = r#"{
  "measure": [ {"type": "power-tail", "s": 2.0}, {"type": "atom", "location": 0.3, "weight": 0.5} ],
  "operator": {"beta": 2.0, "truncation": 64},
  "spaces": {"p": 2.0, "q": 2.0, "alpha": 0.0},
  "moments": {"max_index": 12},
  "classify": {"exponent": 2.0},
  "probe": {"kind": "lower-bound-scan", "a_grid": {"min_dist": 0.01, "max_dist": 0.5, "points": 6}}
}"#;

#[test]
fn moments_and_verify_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), GOOD_CONFIG);
    let out = dir.path().join("out");

    let status = hmu()
        .args(["moments", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let moments = fs::read_to_string(out.join("moments.csv")).unwrap();
    assert!(moments.starts_with("# config_hash="));
    // mu_0 = total mass = 1 + 0.5
    assert!(moments.lines().nth(2).unwrap().starts_with("0,1.5"));

    let status = hmu()
        .args(["verify-outputs", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    // a different config must be rejected by the hash check
    let other = write_config(
        &dir.path().join("."),
        &GOOD_CONFIG.replace("\"s\": 2.0", "\"s\": 2.5"),
    );
    let status = hmu()
        .args(["verify-outputs", "--config"])
        .arg(&other)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();

    // malformed JSON
    let bad = write_config(dir.path(), "{ not json");
    let output = hmu()
        .args(["moments", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // schema violation: unknown field with line-precise message
    let bad = write_config(
        dir.path(),
        r#"{"measure": [], "unknown_section": 1}"#,
    );
    let output = hmu()
        .args(["moments", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line"), "expected line info, got: {stderr}");

    // invalid parameter range
    let bad = write_config(
        dir.path(),
        r#"{"measure": [{"type": "density", "scale": 1.0, "power": -2.0}]}"#,
    );
    let output = hmu()
        .args(["moments", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn numerical_contract_violations_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    // an unreachable identity tolerance makes the run a numerical failure
    let config = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "power-tail", "s": 2.0} ],
  "operator": {"beta": 2.0, "truncation": 64},
  "verify_identity": {
    "functions": [ {"type": "monomial", "k": 1} ],
    "betas": [2.0],
    "rtol": 1e-30
  }
}"#,
    );
    let output = hmu()
        .args(["verify-identity", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn selftest_binary_reports_the_documented_acceptance_state() {
    let dir = tempfile::tempdir().unwrap();
    let output = hmu()
        .arg("selftest")
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(["--seed", "42", "--jobs", "4"])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    let passes = stdout.lines().filter(|l| l.starts_with("PASS")).count();
    let fails: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(passes, 11, "stdout:\n{stdout}");
    assert_eq!(fails.len(), 1, "stdout:\n{stdout}");
    assert!(fails[0].contains("[ 8]"), "unexpected red criterion: {}", fails[0]);
    // a red criterion is a numerical failure
    assert_eq!(output.status.code(), Some(3));
    assert!(dir.path().join("out/acceptance_summary.csv").exists());
}

#[test]
fn truncation_failures_exit_with_code_four() {
    let dir = tempfile::tempdir().unwrap();
    // family parameter too close to 1 for the requested order
    let config = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "power-tail", "s": 2.0} ],
  "operator": {"beta": 2.0, "truncation": 64},
  "spaces": {"p": 2.0, "alpha": 0.0},
  "apply": {"function": {"type": "bergman-f", "a": 0.99, "n_terms": 32}}
}"#,
    );
    let output = hmu()
        .args(["apply", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn probe_outputs_are_identical_across_runs_and_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), GOOD_CONFIG);
    let mut bytes = Vec::new();
    for (label, jobs) in [("a", "2"), ("b", "2"), ("c", "7")] {
        let out = dir.path().join(label);
        let status = hmu()
            .args(["probe", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .args(["--jobs", jobs, "--seed", "42"])
            .status()
            .unwrap();
        assert!(status.success());
        bytes.push(fs::read(out.join("lower_bound_scan.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1], "same jobs, different bytes");
    assert_eq!(bytes[0], bytes[2], "job count changed the results");
}

#[test]
fn remaining_probe_kinds_and_identity_run_clean() {
    let dir = tempfile::tempdir().unwrap();

    let ratio_cfg = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "power-tail", "s": 2.5} ],
  "operator": {"beta": 2.0, "truncation": 2048},
  "spaces": {"p": 2.0, "q": 2.0, "alpha": 0.0},
  "probe": {"kind": "ratio-sup", "family": "bergman-f", "a_grid": [0.5, 0.9]}
}"#,
    );
    let out = dir.path().join("ratio");
    assert!(hmu()
        .args(["probe", "--config"])
        .arg(&ratio_cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    assert!(out.join("ratio_sup.csv").exists());

    let duality_cfg = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "atom", "location": 0.5, "weight": 1.0} ],
  "operator": {"beta": 3.0, "truncation": 64},
  "probe": {"kind": "duality"}
}"#,
    );
    let out = dir.path().join("duality");
    assert!(hmu()
        .args(["probe", "--config"])
        .arg(&duality_cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let duality = fs::read_to_string(out.join("duality.csv")).unwrap();
    assert!(duality.lines().count() > 10);

    let compact_cfg = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "power-tail", "s": 2.5} ],
  "operator": {"beta": 2.0, "truncation": 8},
  "spaces": {"p": 2.0, "q": 2.0, "alpha": 0.0},
  "probe": {"kind": "compactness", "s": 2.0,
            "r_grid": {"min_dist": 0.001, "max_dist": 0.5, "points": 8}}
}"#,
    );
    let out = dir.path().join("compact");
    assert!(hmu()
        .args(["probe", "--config"])
        .arg(&compact_cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let compact: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("compactness.json")).unwrap()).unwrap();
    assert_eq!(
        compact["result"]["vanishing"].as_str().unwrap(),
        "Vanishing"
    );
    // the record carries the run description for reproducibility
    assert_eq!(compact["seed"].as_u64().unwrap(), 0);
    assert!(compact["probe"]["r_grid"].is_object());
    assert!(compact["tolerances"]["integrate"].as_f64().unwrap() > 0.0);

    let identity_cfg = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "power-tail", "s": 2.0} ],
  "operator": {"beta": 2.0, "truncation": 256},
  "spaces": {"p": 2.0, "alpha": 0.0},
  "verify_identity": {
    "functions": [ {"type": "monomial", "k": 2}, {"type": "geometric", "ratio": 0.5, "degree": 32} ],
    "betas": [1.5, 2.0]
  }
}"#,
    );
    let out = dir.path().join("identity");
    assert!(hmu()
        .args(["verify-identity", "--config"])
        .arg(&identity_cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("identity_summary.json")).unwrap())
            .unwrap();
    assert!(summary["max_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn classify_atom_only_measure_reports_degenerate_tail() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{
  "measure": [ {"type": "atom", "location": 0.9, "weight": 1.0} ],
  "classify": {"exponent": 1.0}
}"#,
    );
    let out = dir.path().join("out");
    assert!(hmu()
        .args(["classify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("classify.json")).unwrap()).unwrap();
    assert!(report["fitted_exponent"].is_null());
    assert!(report["degenerate_tail_at"].as_f64().unwrap() > 0.9);
    // the constant report still runs at the requested exponent
    assert!(report["constant_sup"].as_f64().unwrap() > 0.0);
}

#[test]
fn apply_reads_coefficients_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("f.json");
    fs::write(&poly_path, "[[1.0,0.0],[0.5,0.0]]").unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            r#"{{
  "measure": [ {{"type": "atom", "location": 0.5, "weight": 1.0}} ],
  "operator": {{"beta": 1.0, "truncation": 8}},
  "apply": {{"function": {{"type": "file", "path": {:?}}}, "dump_matrix": 4}}
}}"#,
            poly_path
        ),
    );
    let out = dir.path().join("out");
    let status = hmu()
        .args(["apply", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    // H f = f(0.5) / (1 - 0.5 z): coefficients 1.25 * 0.5^n
    let apply: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("apply.json")).unwrap()).unwrap();
    let coeffs = apply["result"].as_array().unwrap();
    let b0 = coeffs[0][0].as_f64().unwrap();
    let b1 = coeffs[1][0].as_f64().unwrap();
    assert!((b0 - 1.25).abs() < 1e-12);
    assert!((b1 - 0.625).abs() < 1e-12);
    assert!(out.join("matrix.csv").exists());
}
