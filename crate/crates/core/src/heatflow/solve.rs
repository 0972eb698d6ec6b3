use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::SparseColMat;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::operator::{assemble_operator, SparseOperator};
use super::probe::{probe_hessian_log, ProbeValue};
use crate::error::{Error, Result};

/// Relative residual above which a linear solve is rejected.
const SOLVE_RESIDUAL_TOL: f64 = 1e-10;
/// Maximum-principle tolerance, relative to `sup φ`.
const MAX_PRINCIPLE_TOL: f64 = 1e-8;

/// Nodal values of a grid function at time `t`.
#[derive(Debug, Clone)]
pub struct ScalarGridField {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl ScalarGridField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>, t: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!("{} values for a grid of {} unknowns", values.len(), grid.len())));
        }
        Ok(ScalarGridField { grid, values, t })
    }

    pub fn sample(grid: Arc<Grid>, phi: &dyn Fn([f64; 2]) -> f64) -> Self {
        let values = grid.sample(phi);
        ScalarGridField { grid, values, t: 0.0 }
    }

    pub fn at(&self, xi: [f64; 2]) -> Result<f64> {
        self.grid.interpolate(&self.values, xi)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min).min(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, u)| w * u).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// θ = ½.
    #[default]
    CrankNicolson,
    /// θ = 1.
    BackwardEuler,
}

impl Scheme {
    fn theta(self) -> f64 {
        match self {
            Scheme::CrankNicolson => 0.5,
            Scheme::BackwardEuler => 1.0,
        }
    }
}

/// A factorised θ-scheme step `(I − θ dt L) uⁿ⁺¹ = (I + (1−θ) dt L) uⁿ`.
pub struct Stepper {
    op: Arc<SparseOperator>,
    dt: f64,
    scheme: Scheme,
    lu: Lu<usize, f64>,
}

impl std::fmt::Debug for Stepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Stepper")
            .field("dim", &self.op.dim())
            .field("dt", &self.dt)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl Stepper {
    pub fn new(op: Arc<SparseOperator>, dt: f64, scheme: Scheme) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive and finite, got {dt}")));
        }
        let n = op.dim();
        let trip = op.shifted_triplets(scheme.theta() * dt);
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
            .map_err(|e| Error::Numerical { stage: format!("sparse assembly: {e:?}"), residual: f64::NAN })?;
        let lu = a.sp_lu().map_err(|e| Error::Numerical { stage: format!("sparse LU: {e:?}"), residual: f64::NAN })?;
        Ok(Stepper { op, dt, scheme, lu })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// One step; returns the new values and the relative solve residual.
    pub fn step(&self, u: &[f64]) -> Result<(Vec<f64>, f64)> {
        let th = self.scheme.theta();
        let lu_ = self.op.apply(u);
        let b: Vec<f64> = u.iter().zip(&lu_).map(|(x, l)| x + (1.0 - th) * self.dt * l).collect();
        let mut x = b.clone();
        self.lu.solve_in_place(faer::MatMut::from_column_major_slice_mut(&mut x, u.len(), 1));
        let lx = self.op.apply(&x);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..x.len() {
            let r = x[i] - th * self.dt * lx[i] - b[i];
            num += r * r;
            den += b[i] * b[i];
        }
        let res = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
        if !res.is_finite() || res > SOLVE_RESIDUAL_TOL {
            return Err(Error::Numerical { stage: "θ-scheme linear solve".into(), residual: res });
        }
        Ok((x, res))
    }
}

/// Advance a field by one Crank–Nicolson step of size `dt`.
pub fn advance(state: &ScalarGridField, dt: f64) -> Result<ScalarGridField> {
    let op = Arc::new(assemble_operator(&state.grid)?);
    let st = Stepper::new(op, dt, Scheme::CrankNicolson)?;
    let (values, _) = st.step(&state.values)?;
    Ok(ScalarGridField { grid: state.grid.clone(), values, t: state.t + dt })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub dt: f64,
    pub scheme: Scheme,
    /// Backward-Euler steps taken before switching to the main scheme; damps
    /// the Crank–Nicolson response to rough data.
    pub startup_steps: usize,
    /// Turn invariant breaches into errors instead of recording them.
    pub strict: bool,
}

impl SolveOptions {
    pub fn new(dt: f64) -> Self {
        SolveOptions { dt, scheme: Scheme::CrankNicolson, startup_steps: 0, strict: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub t: f64,
    pub sup: f64,
    pub min: f64,
    pub mass: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct InvariantSummary {
    pub sup_phi: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub max_residual: f64,
    pub breaches: Vec<String>,
}

impl InvariantSummary {
    pub fn ok(&self) -> bool {
        self.breaches.is_empty()
    }
}

/// Result of [`solve`]: fields at the requested times plus per-step diagnostics.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    pub grid: Arc<Grid>,
    pub initial: ScalarGridField,
    pub fields: Vec<ScalarGridField>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub invariants: InvariantSummary,
    pub dt: f64,
}

impl HeatSolution {
    /// Field at the recorded time closest to `t`.
    pub fn at_time(&self, t: f64) -> Option<&ScalarGridField> {
        self.fields.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    /// `Hess log u(o)(v, v)` at every recorded time.
    pub fn probe_series(&self, v: [f64; 2], h: f64) -> Result<Vec<ProbeValue>> {
        self.fields.iter().map(|f| probe_hessian_log(f, v, h)).collect()
    }
}

/// Solve `∂_t u = Δ_g u` on the grid ball with `u = 0` on the boundary and
/// `u(0) = φ`, recording the field at each of `times`.
///
/// Times are snapped to the nearest positive multiple of `dt`; the snapped
/// values are reported in the returned fields.
pub fn solve(
    grid: Arc<Grid>,
    phi: &dyn Fn([f64; 2]) -> f64,
    times: &[f64],
    opts: &SolveOptions,
) -> Result<HeatSolution> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive and finite, got {}", opts.dt)));
    }
    let mut steps = Vec::with_capacity(times.len());
    for &t in times {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("output time {t} must be positive and finite")));
        }
        let k = ((t / opts.dt).round() as usize).max(1);
        if let Some(&prev) = steps.last() {
            if k <= prev {
                return Err(Error::Domain("output times must be strictly increasing after snapping to dt".into()));
            }
        }
        steps.push(k);
    }
    let initial = ScalarGridField::sample(grid.clone(), phi);
    if let Some(bad) = initial.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Domain(format!("initial datum must be finite and nonnegative, found {bad}")));
    }
    let sup_phi = initial.sup();
    let weights = grid.weights();
    let mass_of = |u: &[f64]| -> f64 { weights.iter().zip(u).map(|(w, x)| w * x).sum() };

    let op = Arc::new(assemble_operator(&grid)?);
    let main = Stepper::new(op.clone(), opts.dt, opts.scheme)?;
    let startup = if opts.startup_steps > 0 && opts.scheme != Scheme::BackwardEuler {
        Some(Stepper::new(op, opts.dt, Scheme::BackwardEuler)?)
    } else {
        None
    };

    let mut summary = InvariantSummary { sup_phi, min_value: 0.0, max_value: sup_phi, ..Default::default() };
    let mut u = initial.values.clone();
    let mut prev_sup = sup_phi;
    let mut prev_mass = mass_of(&u);
    let mass_tol = grid.mass_tolerance() * prev_mass.abs().max(f64::MIN_POSITIVE);
    let last = steps.last().copied().unwrap_or(0);
    let mut diagnostics = Vec::with_capacity(last);
    let mut fields = Vec::with_capacity(steps.len());
    let mut next = 0;
    for n in 1..=last {
        let st = match &startup {
            Some(s) if n <= opts.startup_steps => s,
            _ => &main,
        };
        let (x, res) = st.step(&u)?;
        u = x;
        let t = n as f64 * opts.dt;
        let sup = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = u.iter().copied().fold(f64::INFINITY, f64::min);
        let mass = mass_of(&u);
        summary.min_value = summary.min_value.min(min);
        summary.max_value = summary.max_value.max(sup);
        summary.max_residual = summary.max_residual.max(res);
        let tol = MAX_PRINCIPLE_TOL * sup_phi;
        let mut breach = Vec::new();
        if min < -tol || sup > sup_phi + tol {
            breach.push(format!("maximum principle at t = {t:e}: range [{min:e}, {sup:e}] vs sup φ = {sup_phi:e}"));
        }
        if sup > prev_sup + tol {
            breach.push(format!("sup increased at t = {t:e}: {prev_sup:e} -> {sup:e}"));
        }
        if mass > prev_mass + mass_tol {
            breach.push(format!("mass increased at t = {t:e}: {prev_mass:e} -> {mass:e}"));
        }
        if !breach.is_empty() {
            if opts.strict {
                return Err(Error::Invariant(breach.join("; ")));
            }
            summary.breaches.extend(breach);
        }
        prev_sup = sup;
        prev_mass = mass;
        diagnostics.push(StepDiagnostics { t, sup, min, mass, residual: res });
        if next < steps.len() && steps[next] == n {
            fields.push(ScalarGridField { grid: grid.clone(), values: u.clone(), t });
            next += 1;
        }
    }
    Ok(HeatSolution { grid, initial, fields, diagnostics, invariants: summary, dt: opts.dt })
}
