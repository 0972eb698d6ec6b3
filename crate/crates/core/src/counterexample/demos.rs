use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concavity::AdmissibleFunction;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::geometry::ModelSurface;
use crate::heatflow::{euclidean_semigroup, solve, EuclideanDatum, Grid, PolarGrid, SolveOptions};

/// Chords `[y, z]` with `y` fixed and `z` scanned outward, at fractions `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChordScan {
    pub y: f64,
    pub z_max: f64,
    pub z_points: usize,
    pub taus: Vec<f64>,
    /// Evolution time.
    pub t: f64,
}

impl Default for ChordScan {
    fn default() -> Self {
        ChordScan { y: 0.0, z_max: 10.0, z_points: 40, taus: (1..8).map(|k| k as f64 / 8.0).collect(), t: 1.0 }
    }
}

/// A chord on which `F∘u` lies below its secant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub y: f64,
    pub z: f64,
    pub tau: f64,
    /// `F(u((1−τ)y + τz)) − [(1−τ)F(u(y)) + τF(u(z))]`.
    pub slack: f64,
}

fn slack_at(f: &AdmissibleFunction, u: &dyn Fn(f64) -> Result<f64>, y: f64, z: f64, tau: f64) -> Result<f64> {
    let fy = f.eval(u(y)?)?;
    let fz = f.eval(u(z)?)?;
    let fm = f.eval(u((1.0 - tau) * y + tau * z)?)?;
    Ok(fm.slack_over(ExtReal::chord(fy, fz, tau)))
}

/// Minimum chord slack of `F ∘ e^{tΔ}(a′𝟙_{[−1,1]})` over the scan (`n = 1`).
pub fn chord_scan(f: &AdmissibleFunction, a_prime: f64, scan: &ChordScan) -> Result<Certificate> {
    if !(a_prime > 0.0 && a_prime < f.domain_sup()) {
        return Err(Error::Domain(format!("height a′ = {a_prime} must lie in (0, {})", f.domain_sup())));
    }
    if scan.z_points == 0 || scan.taus.is_empty() || !(scan.z_max > scan.y) {
        return Err(Error::Domain("empty chord scan".into()));
    }
    let datum = EuclideanDatum::BallIndicator { radius: 1.0, height: a_prime };
    let u = |x: f64| euclidean_semigroup(&datum, &[x], scan.t);
    let mut best = Certificate { y: scan.y, z: scan.y, tau: 0.0, slack: f64::INFINITY };
    for k in 1..=scan.z_points {
        let z = scan.y + (scan.z_max - scan.y) * k as f64 / scan.z_points as f64;
        for &tau in &scan.taus {
            let s = slack_at(f, &u, scan.y, z, tau)?;
            if s < best.slack {
                best = Certificate { y: scan.y, z, tau, slack: s };
            }
        }
    }
    Ok(best)
}

/// An `∞`-concave datum (`a′𝟙_{[−1,1]}`) whose heat evolution is not
/// `F`-concave, for `F` with a finite limit at `0⁺`.
///
/// Returns the most negative chord found; fails with
/// [`Error::SearchFailure`] if none is below `−1e−3`.
pub fn infinity_counterexample_demo(f: &AdmissibleFunction, a_prime: f64, scan: &ChordScan) -> Result<Certificate> {
    if !f.limit_at_zero().is_finite() {
        return Err(Error::Precondition(format!("{} has no finite limit at 0⁺", f.label())));
    }
    let c = chord_scan(f, a_prime, scan)?;
    if c.slack < -1e-3 {
        Ok(c)
    } else {
        Err(Error::SearchFailure(format!(
            "no chord below −1e−3 for y = {}, z ∈ (y, {}], {} fractions (best slack {:e})",
            scan.y,
            scan.z_max,
            scan.taus.len(),
            c.slack
        )))
    }
}

/// Smooth radial bump `exp(1 − 1/(1 − (|x|/r)²))` of radius `r`.
pub fn radial_bump(radius: f64) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |rho: f64| {
        let q = rho / radius;
        if q >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - q * q)).exp()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RescalingRow {
    pub lambda: f64,
    /// `sup |ũ_λ − e^{sΔ}ψ|` over `|x| ≤ compact` and the sampled times.
    pub sup_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescalingReport {
    pub rows: Vec<RescalingRow>,
    /// The same comparison on the flat surface (discretisation error only).
    pub floor: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RescalingParams {
    pub bump_radius: f64,
    /// Solve radius in rescaled units.
    pub solve_radius: f64,
    pub compact: f64,
    pub n_rho: usize,
    pub n_theta: usize,
    /// Rescaled times `s`; the surface flow is read at `t = s/λ²`.
    pub times: Vec<f64>,
}

impl Default for RescalingParams {
    fn default() -> Self {
        RescalingParams {
            bump_radius: 0.5,
            solve_radius: 3.0,
            compact: 1.0,
            n_rho: 240,
            n_theta: 64,
            times: vec![0.01, 0.02, 0.05],
        }
    }
}

fn rescaled_difference(surface: &ModelSurface, lambda: f64, p: &RescalingParams, oracle: &[Vec<f64>]) -> Result<f64> {
    let radius = p.solve_radius / lambda;
    if radius > surface.convexity_radius() {
        return Err(Error::Domain(format!(
            "λ = {lambda}: solve radius {radius} exceeds the chart guard {}",
            surface.convexity_radius()
        )));
    }
    let grid = Arc::new(Grid::Polar(PolarGrid::new(*surface, radius, p.n_rho, p.n_theta)?));
    let bump = radial_bump(p.bump_radius);
    let phi = move |xi: [f64; 2]| bump(lambda * xi[0].hypot(xi[1]));
    let h = p.solve_radius / p.n_rho as f64;
    let dt = 0.25 * h * h / (lambda * lambda);
    let times: Vec<f64> = p.times.iter().map(|s| s / (lambda * lambda)).collect();
    let sol = solve(grid.clone(), &phi, &times, &SolveOptions::new(dt))?;
    let rings = (p.compact / h).floor() as usize;
    let mut worst: f64 = 0.0;
    for (field, exact) in sol.fields.iter().zip(oracle) {
        for (k, &e) in exact.iter().enumerate().take(rings + 1) {
            let rho = k as f64 * h / lambda;
            for j in 0..p.n_theta {
                let th = 2.0 * std::f64::consts::PI * j as f64 / p.n_theta as f64;
                let u = field.at([rho * th.cos(), rho * th.sin()])?;
                worst = worst.max((u - e).abs());
            }
        }
    }
    Ok(worst)
}

/// Compare the rescaled surface flow `ũ_λ(x, s) = u(x/λ, s/λ²)` of the datum
/// `ψ(λξ)` with the Euclidean flow of `ψ` on `|x| ≤ compact`.
pub fn rescaling_experiment(
    surface: &ModelSurface,
    ladder: &[f64],
    params: &RescalingParams,
) -> Result<RescalingReport> {
    if ladder.is_empty() || ladder.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::Domain("λ ladder must be nonempty and positive".into()));
    }
    if params.bump_radius >= params.solve_radius || params.compact >= params.solve_radius {
        return Err(Error::Domain("datum support and compact must lie inside the solve ball".into()));
    }
    let h = params.solve_radius / params.n_rho as f64;
    let rings = (params.compact / h).floor() as usize;
    let bump = radial_bump(params.bump_radius);
    let rb = params.bump_radius;
    let datum = EuclideanDatum::Compact { radius: rb, f: Arc::new(move |y: &[f64]| bump(y[0].hypot(y[1]))) };
    // the datum is radial, so the oracle depends on |x| only
    let oracle: Vec<Vec<f64>> = params
        .times
        .iter()
        .map(|&s| {
            (0..=rings)
                .into_par_iter()
                .map(|k| euclidean_semigroup(&datum, &[k as f64 * h, 0.0], s))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let rows = ladder
        .par_iter()
        .map(|&lambda| {
            Ok(RescalingRow { lambda, sup_difference: rescaled_difference(surface, lambda, params, &oracle)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let floor = rescaled_difference(&ModelSurface::flat(), ladder[0], params, &oracle)?;
    let monotone = rows.windows(2).all(|w| w[1].sup_difference <= w[0].sup_difference + floor);
    Ok(RescalingReport { rows, floor, monotone })
}
