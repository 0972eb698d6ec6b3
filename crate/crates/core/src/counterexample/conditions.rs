use rayon::prelude::*;
use serde::Serialize;

use super::psi::Psi;
use super::spec::{Branch, CounterexampleSpec};
use crate::error::{Error, Result};
use crate::geometry::{covariant_hessian_matrix, grad_norm_sq, laplace_beltrami, ModelSurface, NormalPoint};

/// Largest admissible eigenvalue of `Hess ψ` in the concavity sweep.
pub const NSD_TOL: f64 = 1e-8;
const SWEEP_RADII: usize = 200;
const SWEEP_ANGLES: usize = 180;
const DET_DIRECTIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NsdSweep {
    pub radius: f64,
    pub worst_eigenvalue: f64,
    pub worst_point: [f64; 2],
}

fn max_eigenvalue(h: [[f64; 2]; 2]) -> f64 {
    let m = 0.5 * (h[0][0] + h[1][1]);
    let d = 0.5 * (h[0][0] - h[1][1]);
    let off = 0.5 * (h[0][1] + h[1][0]);
    m + d.hypot(off)
}

/// Worst eigenvalue of `Hess ψ` over a polar sample of `B(radius)`
/// (`200` radii × `180` angles, plus `o`).
pub fn nsd_sweep(surface: &ModelSurface, psi: &Psi, radius: f64) -> Result<NsdSweep> {
    let at = |xi: [f64; 2]| -> Result<(f64, [f64; 2])> {
        Ok((max_eigenvalue(covariant_hessian_matrix(surface, psi, NormalPoint { xi })?), xi))
    };
    let origin = at([0.0, 0.0])?;
    let best = (1..=SWEEP_RADII)
        .into_par_iter()
        .map(|i| -> Result<(f64, [f64; 2])> {
            let rho = radius * i as f64 / SWEEP_RADII as f64;
            let mut worst = (f64::NEG_INFINITY, [0.0; 2]);
            for j in 0..SWEEP_ANGLES {
                let th = 2.0 * std::f64::consts::PI * j as f64 / SWEEP_ANGLES as f64;
                let e = at([rho * th.cos(), rho * th.sin()])?;
                if e.0 > worst.0 {
                    worst = e;
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(origin, |a, b| if b.0 > a.0 { b } else { a });
    Ok(NsdSweep { radius, worst_eigenvalue: best.0, worst_point: best.1 })
}

/// Largest `δ ∈ (0, r)` (to bisection tolerance `1e-3·r`) on which the
/// sampled `Hess ψ` is negative semidefinite.
pub fn choose_delta(surface: &ModelSurface, psi: &Psi, r: f64) -> Result<(f64, NsdSweep)> {
    let top = r * (1.0 - 1e-3);
    let full = nsd_sweep(surface, psi, top)?;
    if full.worst_eigenvalue <= NSD_TOL {
        return Ok((top, full));
    }
    let tol = 1e-3 * r;
    let (mut lo, mut hi) = (0.0, top);
    let mut best: Option<NsdSweep> = None;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let s = nsd_sweep(surface, psi, mid)?;
        if s.worst_eigenvalue <= NSD_TOL {
            lo = mid;
            best = Some(s);
        } else {
            hi = mid;
        }
    }
    match best {
        Some(s) => Ok((lo, s)),
        None => Err(Error::ConstructionFailure(format!(
            "no concavity radius above the bisection resolution {tol:e} (λ = {})",
            psi.lambda()
        ))),
    }
}

/// Determinant diagnostics along `τ ↦ exp_o(τv)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetCheck {
    pub v: [f64; 2],
    /// `d/dτ det H(0)`.
    pub d1: f64,
    /// `(−1)^{n−1} d²/dτ² det H(0)`.
    pub d2_signed: f64,
    pub h11_pp: f64,
    pub h12_p: f64,
    /// `(2λ²)^{n−1} h₁₁″(0) + 2(2λ²)^{n−2} Σ h₁ᵢ′(0)²`, from the entry derivatives.
    pub d2_from_entries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub branch: Branch,
    pub c1: f64,
    pub c2: f64,
    pub c3_numeric: f64,
    pub c3_closed_form: f64,
    pub det_checks: Vec<DetCheck>,
    /// `(2λ²)^{n−1}(−4C + 16C/9)`.
    pub det_bound: f64,
    pub failures: Vec<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fd1(f: &dyn Fn(f64) -> Result<f64>, s: f64) -> Result<f64> {
    Ok((-f(2.0 * s)? + 8.0 * f(s)? - 8.0 * f(-s)? + f(-2.0 * s)?) / (12.0 * s))
}

fn fd2(f: &dyn Fn(f64) -> Result<f64>, s: f64) -> Result<f64> {
    Ok((-f(2.0 * s)? + 16.0 * f(s)? - 30.0 * f(0.0)? + 16.0 * f(-s)? - f(-2.0 * s)?) / (12.0 * s * s))
}

/// `Hess(Δψ + |∇ψ|²)(e₁,e₁)(o)` by fourth-order differences along `ξ¹`.
pub fn c3_numeric(surface: &ModelSurface, psi: &Psi, r: f64) -> Result<f64> {
    let s = (0.25 / psi.lambda()).min(0.1 * r);
    let q = |x: f64| -> Result<f64> {
        let p = NormalPoint { xi: [x, 0.0] };
        Ok(laplace_beltrami(surface, psi, p)? + grad_norm_sq(surface, psi, p)?)
    };
    fd2(&q, s)
}

/// Check (C1)–(C3) and the determinant criteria for a spec.
///
/// Fails with [`Error::GeometryBug`] when the numeric and closed-form `c3`
/// disagree by more than 1%; every other shortfall is listed in
/// [`ConditionReport::failures`].
pub fn verify_conditions(surface: &ModelSurface, spec: &CounterexampleSpec) -> Result<ConditionReport> {
    let psi = spec.psi();
    let n = spec.curv.n();
    let lam = spec.lambda;
    let c = spec.c;
    let sweep = nsd_sweep(surface, &psi, spec.delta)?;
    let c1 = sweep.worst_eigenvalue;
    let c2 = covariant_hessian_matrix(surface, &psi, NormalPoint::origin())?[0][0].abs();
    let c3n = c3_numeric(surface, &psi, spec.r)?;
    let c3c = spec.c3_closed_form;
    if (c3n - c3c).abs() > 0.01 * c3c.abs() {
        return Err(Error::GeometryBug { numeric: c3n, closed_form: c3c });
    }

    let scale = (2.0 * lam * lam).powi(n as i32 - 1);
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let det_bound = scale * (-4.0 * c + 16.0 * c / 9.0);
    let s = (1e-3 / lam).min(1e-3 * spec.r);
    let det_checks: Vec<DetCheck> = (0..DET_DIRECTIONS)
        .into_par_iter()
        .map(|j| -> Result<DetCheck> {
            let th = std::f64::consts::PI * j as f64 / (DET_DIRECTIONS / 2) as f64;
            let v = [th.cos(), th.sin()];
            let h = |t: f64| covariant_hessian_matrix(surface, &psi, NormalPoint { xi: [t * v[0], t * v[1]] });
            let det = |t: f64| -> Result<f64> {
                let m = h(t)?;
                Ok(m[0][0] * m[1][1] - m[0][1] * m[1][0])
            };
            let h11 = |t: f64| -> Result<f64> { Ok(h(t)?[0][0]) };
            let h12 = |t: f64| -> Result<f64> { Ok(h(t)?[0][1]) };
            let d1 = fd1(&det, s)?;
            let d2_signed = sign * fd2(&det, s)?;
            let h11_pp = fd2(&h11, s)?;
            let h12_p = fd1(&h12, s)?;
            let d2_from_entries = scale * h11_pp + 2.0 * scale / (2.0 * lam * lam) * h12_p * h12_p;
            Ok(DetCheck { v, d1, d2_signed, h11_pp, h12_p, d2_from_entries })
        })
        .collect::<Result<_>>()?;

    let mut failures = Vec::new();
    if c1 > NSD_TOL {
        failures.push(format!("(C1) Hess ψ has eigenvalue {c1:e} on B(δ)"));
    }
    if c2 > 1e-9 {
        failures.push(format!("(C2) |Hess ψ(e₁,e₁)(o)| = {c2:e}"));
    }
    if !(c3n > 1e-9 * c3c.abs().max(1.0)) {
        failures.push(format!("(C3) c3 = {c3n:e} is not positive"));
    }
    let h1_bound = (4.0 / 3.0) * lam * (c / (n - 1) as f64).sqrt();
    for d in &det_checks {
        let at = format!("v = ({:.4}, {:.4})", d.v[0], d.v[1]);
        if d.d1.abs() > 1e-6 * scale {
            failures.push(format!("first determinant derivative {:e} at {at}", d.d1));
        }
        if !(d.d2_signed < 0.0) {
            failures.push(format!("signed second determinant derivative {:e} at {at}", d.d2_signed));
        }
        if d.d2_signed > det_bound + 0.1 * det_bound.abs() {
            failures
                .push(format!("second determinant derivative {:e} above the bound {det_bound:e} at {at}", d.d2_signed));
        }
        if d.h11_pp > -4.0 * c * 0.95 {
            failures.push(format!("h11''(0) = {:e} above −4C at {at}", d.h11_pp));
        }
        if d.h12_p.abs() > h1_bound * (1.0 + 1e-6) {
            failures.push(format!("|h12'(0)| = {:e} above {h1_bound:e} at {at}", d.h12_p.abs()));
        }
    }
    Ok(ConditionReport {
        branch: spec.branch,
        c1,
        c2,
        c3_numeric: c3n,
        c3_closed_form: c3c,
        det_checks,
        det_bound,
        failures,
    })
}
