use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_curvheat")).args(args).arg("--config").arg(&cfg).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn flat_obstruction_runs_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(dir.path(), "experiment = \"flat_obstruction\"\n", &["run", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["manifest.json", "report.json", "timeseries.csv", "plotdata/c3_scan.csv"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let ts = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    assert!(ts.starts_with("# curvheat timeseries v1\nt,hess_log_u_e1e1,probe_error,sup_u,mass\n"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["outcome"], "degenerate_curvature");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["artifact_version"], "1");
    assert!(manifest["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(manifest["config"]["experiment"], "flat_obstruction");
}

#[test]
fn negative_dt_is_a_usage_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "experiment = \"baseline_flat\"\n[time]\ndt = -0.001\n", &["run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("time.dt"), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "experiment = \"baseline_flat\"\n[grid]\nn_rh = 64\n", &["run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_rh"), "{}", stderr(&o));
}

#[test]
fn mismatched_surface_sign_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "experiment = \"breaking\"\n[surface]\nkind = \"sphere\"\nK = -1.0\n", &["describe"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("surface.K"), "{}", stderr(&o));
}

#[test]
fn missing_config_is_a_usage_error() {
    let o =
        Command::new(env!("CARGO_BIN_EXE_curvheat")).args(["run", "--config", "/nonexistent/x.toml"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let o = run(dir.path(), "experiment = \"infinity_demo\"\n", &["run", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        reports.push(fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn baseline_flat_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(dir.path(), "experiment = \"baseline_flat\"\n", &["run", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ts = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    let rows: Vec<Vec<f64>> = ts.lines().skip(2).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.len() >= 40);
    assert!(rows.iter().all(|r| r[1] < 0.0));
}

#[test]
fn failing_check_exits_one() {
    // with a tiny chord grid no violation of F(r) = r is found
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = "experiment = \"infinity_demo\"\n[demo]\nz_max = 0.1\nz_points = 2\n";
    let o = run(dir.path(), cfg, &["run", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"error\""));
}

#[test]
fn describe_prints_derived_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "experiment = \"breaking\"\n[surface]\nkind = \"hyperbolic\"\nK = -1.0\n", &["describe"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["plan"]["branch"], "empty_i_plus");
    assert!((v["plan"]["C"].as_f64().unwrap() - 8.4).abs() < 1e-9);
    assert!((v["plan"]["lambda"].as_f64().unwrap() - 266.092).abs() < 1e-3);
}

#[test]
fn sweep_writes_one_directory_per_variant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = run(
        dir.path(),
        "experiment = \"infinity_demo\"\n",
        &["sweep", "--out", out.to_str().unwrap(), "--set", "demo.a_prime=1.0,2.0"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for v in ["demo.a_prime=1.0", "demo.a_prime=2.0"] {
        assert!(out.join(v).join("report.json").exists(), "missing {v}");
    }
}
