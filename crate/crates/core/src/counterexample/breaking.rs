use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spec::CounterexampleSpec;
use crate::error::{Error, Result};
use crate::geometry::ModelSurface;
use crate::heatflow::{solve, ChartGrid, Grid, HeatSolution, SolveOptions};

/// Numerical parameters of a breaking run, in units of the construction's
/// length scale `1/λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BreakingParams {
    /// Lattice cells per solve radius in the coarsest run.
    pub cells: usize,
    /// `dt = dt_scale / λ²` for the two coarser runs; the finest uses `dt/2`.
    pub dt_scale: f64,
    /// Scanned window `t ≤ window / λ²`.
    pub window: f64,
    /// Record every this many steps of the coarse `dt`.
    pub record_every: usize,
    /// Innermost probe width `probe_width / λ`.
    pub probe_width: f64,
    /// Add the doubled-resolution run used for the stability check.
    pub refine: bool,
    /// Fraction of the window used to fit the early slope.
    pub slope_fraction: f64,
    pub strict: bool,
}

impl Default for BreakingParams {
    fn default() -> Self {
        BreakingParams {
            cells: 64,
            dt_scale: 1e-4,
            window: 0.02,
            record_every: 2,
            probe_width: 0.1875,
            refine: true,
            slope_fraction: 0.3,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakingVerdict {
    Broken,
    NotBroken,
    /// Positive somewhere but never beyond three error estimates.
    Inconclusive,
}

/// One time of a resolution pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakingPoint {
    pub t: f64,
    /// `Hess log u(e₁,e₁)(o)` from the finer run of the pair.
    pub value: f64,
    pub probe_error: f64,
    /// Probe error plus the change from the coarser run.
    pub error: f64,
    pub sup_u: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub cells: [usize; 2],
    pub verdict: BreakingVerdict,
    pub first_broken_t: Option<f64>,
    /// Largest `value / error` over the window.
    pub max_ratio: f64,
    pub series: Vec<BreakingPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeCheck {
    pub expected: f64,
    pub fitted: f64,
    pub relative_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakingReport {
    pub verdict: BreakingVerdict,
    pub base: PairVerdict,
    pub refined: Option<PairVerdict>,
    /// Refined verdict equals the base verdict and the finest values moved by
    /// less than the base error estimates.
    pub stable: Option<bool>,
    pub slope: SlopeCheck,
    /// Support radius of the datum.
    pub delta_run: f64,
    pub solve_radius: f64,
    pub dt: f64,
    pub invariant_breaches: Vec<String>,
    pub hint: Option<String>,
}

impl BreakingReport {
    pub fn broken(&self) -> bool {
        self.verdict == BreakingVerdict::Broken
    }
}

type Datum = Arc<dyn Fn([f64; 2], f64) -> f64 + Send + Sync>;

struct Run {
    series: Vec<(f64, f64, f64, f64, f64)>,
    breaches: Vec<String>,
}

fn run_one(
    surface: &ModelSurface,
    datum: &Datum,
    radius: f64,
    cells: usize,
    dt: f64,
    times: &[f64],
    width: f64,
    strict: bool,
) -> Result<Run> {
    let grid = Arc::new(Grid::Chart(ChartGrid::new(*surface, radius, cells)?));
    let h = grid.spacing();
    let d = datum.clone();
    let phi = move |xi: [f64; 2]| d(xi, h);
    let mut opts = SolveOptions::new(dt);
    opts.strict = strict;
    let sol: HeatSolution = solve(grid, &phi, times, &opts)?;
    let probes = sol.probe_series([1.0, 0.0], width)?;
    let series = sol.fields.iter().zip(&probes).map(|(f, p)| (f.t, p.value, p.error, f.sup(), f.mass())).collect();
    Ok(Run { series, breaches: sol.invariants.breaches })
}

fn pair(coarse: &Run, fine: &Run, cells: [usize; 2]) -> PairVerdict {
    let series: Vec<BreakingPoint> = coarse
        .series
        .iter()
        .zip(&fine.series)
        .map(|(c, f)| BreakingPoint {
            t: f.0,
            value: f.1,
            probe_error: f.2,
            error: f.2 + (f.1 - c.1).abs(),
            sup_u: f.3,
            mass: f.4,
        })
        .collect();
    let first_broken_t = series.iter().find(|p| p.value > 3.0 * p.error).map(|p| p.t);
    let max_ratio = series.iter().map(|p| p.value / p.error).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if first_broken_t.is_some() {
        BreakingVerdict::Broken
    } else if series.iter().any(|p| p.value > 0.0) {
        BreakingVerdict::Inconclusive
    } else {
        BreakingVerdict::NotBroken
    };
    PairVerdict { cells, verdict, first_broken_t, max_ratio, series }
}

/// Least-squares `a` in `H(t) − H₀ ≈ a t + b t²`.
fn fit_slope(points: &[BreakingPoint], h0: f64) -> f64 {
    let (mut s2, mut s3, mut s4, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let t = p.t;
        let y = p.value - h0;
        s2 += t * t;
        s3 += t * t * t;
        s4 += t * t * t * t;
        y1 += t * y;
        y2 += t * t * y;
    }
    let det = s2 * s4 - s3 * s3;
    if det == 0.0 {
        return f64::NAN;
    }
    (y1 * s4 - y2 * s3) / det
}

fn run_breaking(
    surface: &ModelSurface,
    datum: Datum,
    lambda: f64,
    delta_run: f64,
    h0: f64,
    expected_slope: f64,
    params: &BreakingParams,
) -> Result<BreakingReport> {
    if params.cells < 16 || params.record_every == 0 || !(params.dt_scale > 0.0) || !(params.window > 0.0) {
        return Err(Error::Domain(format!("invalid breaking parameters {params:?}")));
    }
    let radius = 2.0 * delta_run;
    let dt = params.dt_scale / (lambda * lambda);
    let t_max = params.window / (lambda * lambda);
    let every = params.record_every as f64 * dt;
    let count = (t_max / every).round() as usize;
    let times: Vec<f64> = (1..=count).map(|k| k as f64 * every).collect();
    let width = params.probe_width / lambda;
    let n0 = params.cells;
    let go = |cells: usize, dt: f64| run_one(surface, &datum, radius, cells, dt, &times, width, params.strict);
    let (r0, (r1, r2)) = rayon::join(
        || go(n0, dt),
        || rayon::join(|| go(2 * n0, dt), || if params.refine { Some(go(4 * n0, 0.5 * dt)) } else { None }),
    );
    let (r0, r1) = (r0?, r1?);
    let r2 = r2.transpose()?;
    let base = pair(&r0, &r1, [n0, 2 * n0]);
    let refined = r2.as_ref().map(|r2| pair(&r1, r2, [2 * n0, 4 * n0]));
    let stable = refined.as_ref().map(|rf| {
        rf.verdict == base.verdict
            && rf.series.iter().zip(&base.series).all(|(f, b)| (f.value - b.value).abs() < b.error)
    });
    let best = refined.as_ref().unwrap_or(&base);
    let early: Vec<BreakingPoint> =
        best.series.iter().copied().filter(|p| p.t <= params.slope_fraction * t_max * (1.0 + 1e-9)).collect();
    let fitted = fit_slope(&early, h0);
    let relative_error = ((fitted - expected_slope) / expected_slope).abs();
    let slope = SlopeCheck { expected: expected_slope, fitted, relative_error, passed: relative_error <= 0.2 };
    let mut invariant_breaches = r0.breaches;
    invariant_breaches.extend(r1.breaches);
    if let Some(r2) = r2 {
        invariant_breaches.extend(r2.breaches);
    }
    let hint = match base.verdict {
        BreakingVerdict::Inconclusive => Some(format!(
            "probe stays within three error estimates; rerun with cells = {} or a smaller dt_scale",
            2 * n0
        )),
        _ => None,
    };
    Ok(BreakingReport {
        verdict: base.verdict,
        base,
        refined,
        stable,
        slope,
        delta_run,
        solve_radius: radius,
        dt,
        invariant_breaches,
        hint,
    })
}

/// One-cell ramp from 1 inside `B(δ)` to 0 outside.
fn cutoff(rho: f64, delta: f64, h: f64) -> f64 {
    ((delta - rho) / h + 0.5).clamp(0.0, 1.0)
}

/// Flow `φ = e^ψ 𝟙_{B(δ)}` and scan `Hess log u(e₁,e₁)(o)` for a sign change.
///
/// The datum is supported in `B(min(δ, 2/λ))` and the flow is solved on
/// twice that radius, on Cartesian normal-coordinate lattices with
/// `cells`, `2·cells` (and, when refining, `4·cells` at `dt/2`) cells per
/// radius.
pub fn breaking_experiment(
    surface: &ModelSurface,
    spec: &CounterexampleSpec,
    params: &BreakingParams,
) -> Result<BreakingReport> {
    let lambda = spec.lambda;
    let delta_run = spec.delta.min(2.0 / lambda);
    let psi = spec.psi();
    let datum: Datum = Arc::new(move |xi: [f64; 2], h: f64| {
        let rho = xi[0].hypot(xi[1]);
        psi.eval(&xi).exp() * cutoff(rho, delta_run, h)
    });
    run_breaking(surface, datum, lambda, delta_run, 0.0, spec.c3_closed_form, params)
}

/// The same scan for the log-concave datum `exp(−|ξ|²/(4s))` with
/// `s = (1/(2λ))²`, cut off at `2/λ`. On the flat surface
/// `Hess log u(e₁,e₁)(o) = −1/(2(s+t))` and the verdict is not-broken.
pub fn breaking_gaussian_baseline(
    surface: &ModelSurface,
    lambda: f64,
    params: &BreakingParams,
) -> Result<BreakingReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("length scale λ must be positive, got {lambda}")));
    }
    let s = 0.25 / (lambda * lambda);
    let delta_run = 2.0 / lambda;
    let datum: Datum = Arc::new(move |xi: [f64; 2], h: f64| {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1];
        (-r2 / (4.0 * s)).exp() * cutoff(r2.sqrt(), delta_run, h)
    });
    run_breaking(surface, datum, lambda, delta_run, -0.5 / s, 0.5 / (s * s), params)
}
