use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::experiments::{Outcome, PlotTable, SeriesRow, Stage};

pub const ARTIFACT_VERSION: &str = "1";
pub const TIMESERIES_HEADER: &str = "# curvheat timeseries v1";

pub fn timeseries_csv(rows: &[SeriesRow]) -> String {
    let mut s = format!("{TIMESERIES_HEADER}\nt,hess_log_u_e1e1,probe_error,sup_u,mass\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.t, r.hess_log_u_e1e1, r.probe_error, r.sup_u, r.mass);
    }
    s
}

pub fn plot_csv(p: &PlotTable) -> String {
    let mut s = p.columns.join(",");
    s.push('\n');
    for row in &p.rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Deterministic summary; contains no timings.
pub fn report_json(cfg: &RunConfig, out: &Outcome) -> Value {
    json!({
        "artifact_version": ARTIFACT_VERSION,
        "experiment": cfg.experiment.name(),
        "passed": out.passed(),
        "checks": out.checks,
        "derived": out.derived,
        "invariant_breaches": out.breaches,
        "result": out.report,
    })
}

pub fn manifest_json(cfg: &RunConfig, out: &Outcome, stages: &[Stage], wall: f64, error: Option<&str>) -> Value {
    json!({
        "artifact_version": ARTIFACT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "experiment": cfg.experiment.name(),
        "config": cfg,
        "derived": out.derived,
        "stages": stages,
        "invariants": {
            "breaches": out.breaches.len(),
            "messages": out.breaches,
        },
        "checks_passed": out.passed(),
        "error": error,
        "wall_clock_seconds": wall,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_artifacts(dir: &Path, cfg: &RunConfig, out: &Outcome, wall: f64) -> Result<()> {
    fs::create_dir_all(dir.join("plotdata")).with_context(|| format!("creating {}", dir.display()))?;
    write(
        &dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest_json(cfg, out, &out.stages, wall, None))?,
    )?;
    write(&dir.join("report.json"), &serde_json::to_string_pretty(&report_json(cfg, out))?)?;
    write(&dir.join("timeseries.csv"), &timeseries_csv(&out.series))?;
    for p in &out.plots {
        write(&dir.join("plotdata").join(format!("{}.csv", p.name)), &plot_csv(p))?;
    }
    Ok(())
}

/// Manifest for a run that stopped at a failing stage.
pub fn write_failure(dir: &Path, cfg: &RunConfig, stages: &[Stage], wall: f64, error: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let m = manifest_json(cfg, &Outcome::default(), stages, wall, Some(error));
    write(&dir.join("manifest.json"), &serde_json::to_string_pretty(&m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timeseries_header_is_versioned() {
        let rows = [SeriesRow { t: 0.5, hess_log_u_e1e1: -1.0, probe_error: 1e-6, sup_u: 1.0, mass: 2.0 }];
        let csv = timeseries_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(TIMESERIES_HEADER));
        assert_eq!(lines.next(), Some("t,hess_log_u_e1e1,probe_error,sup_u,mass"));
        assert_eq!(lines.next(), Some("0.5,-1,0.000001,1,2"));
    }

    #[test]
    fn plot_rows_match_columns() {
        let p = PlotTable { name: "x".into(), columns: vec!["a".into(), "b".into()], rows: vec![vec![1.0, 2.5]] };
        assert_eq!(plot_csv(&p), "a,b\n1,2.5\n");
    }
}
