use serde::Serialize;

use super::admissible::{heated_step, AdmissibleFunction};
use super::audit::{audit_curves_with, triple_slacks, AuditOptions, AuditReport, Criterion, Sampler};
use crate::error::{Error, Result};
use crate::geometry::{ModelSurface, ScalarField};

/// Diagnostics of one hot-approximation fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HotFitReport {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `sup |g_a − f|` over the fit points and audit samples.
    pub sup_error: f64,
    /// `sup |H_a(g_a) − (α log f + β)|` over points with `f > 0`.
    pub identity_error: f64,
    pub fit_points: usize,
    /// `H_a`-audit of `g_a` on the sampler's geodesics.
    pub audit: AuditReport,
}

/// `g_a = a·Ψ(α log f + β)`, an `H_a`-concave surrogate of a log-concave `f`.
pub struct HotApproximation<'f> {
    f: &'f dyn ScalarField,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub report: HotFitReport,
}

fn surrogate(a: f64, alpha: f64, beta: f64, v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        a * heated_step(alpha * v.ln() + beta)
    }
}

impl ScalarField for HotApproximation<'_> {
    fn value(&self, xi: [f64; 2]) -> f64 {
        surrogate(self.a, self.alpha, self.beta, self.f.value(xi))
    }
}

fn fit_points(radius: f64, curves: &[crate::geometry::SampledCurve]) -> Vec<[f64; 2]> {
    let mut pts = vec![[0.0, 0.0]];
    let (nr, nt) = (40, 64);
    for i in 1..=nr {
        let r = radius * (1.0 - 1e-9) * i as f64 / nr as f64;
        for j in 0..nt {
            let th = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
            pts.push([r * th.cos(), r * th.sin()]);
        }
    }
    for c in curves {
        pts.extend_from_slice(&c.points);
    }
    pts
}

/// Fits `H_a(f) ≈ α log f + β` by least squares on `{f ≥ margin·sup f}` and
/// returns `g_a = a·Ψ(α log f + β)`.
///
/// `H_a(g_a) = α log f + β` is concave along geodesics whenever `log f` is and
/// `α > 0`; this is re-verified by an `H_a`-audit rather than assumed.
pub fn hot_approximation<'f>(
    f: &'f dyn ScalarField,
    surface: &ModelSurface,
    ball_radius: f64,
    a: f64,
    margin: f64,
    sampler: &Sampler,
    opts: &AuditOptions,
) -> Result<HotApproximation<'f>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("hot parameter must be positive and finite, got {a}")));
    }
    let (curves, failures) = sampler.curves(surface, ball_radius)?;
    let log = AdmissibleFunction::log();
    let pre = audit_curves_with(f, &curves, Criterion::F(&log), opts, failures)?;
    if !pre.passed() {
        return Err(Error::Precondition(format!(
            "input is not log-concave on the sample set (min slack {:e})",
            pre.min_slack
        )));
    }
    let pts = fit_points(ball_radius, &curves);
    let vals: Vec<f64> = pts.iter().map(|&p| f.value(p)).collect();
    let sup = vals.iter().fold(0.0f64, |m, &v| m.max(v));
    if !(sup > 0.0) {
        return Err(Error::Precondition("input vanishes on every fit point".into()));
    }
    if sup >= a {
        return Err(Error::Admissibility { value: sup, sup: a });
    }
    let hot = AdmissibleFunction::hot(a)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &v in &vals {
        if v >= margin * sup && v > 0.0 {
            xs.push(v.ln());
            ys.push(hot.eval(v)?.to_f64());
        }
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let (alpha, beta) = if sxx <= 1e-24 * m * (1.0 + mx * mx) {
        // Constant input: reproduce it exactly.
        (1.0, my - mx)
    } else {
        let alpha = sxy / sxx;
        (alpha, my - alpha * mx)
    };
    if !(alpha > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::ApproximationFailure { best_error: f64::INFINITY, min_slack: f64::NAN });
    }
    let mut sup_error: f64 = 0.0;
    let mut identity_error: f64 = 0.0;
    for &v in &vals {
        let g = surrogate(a, alpha, beta, v);
        sup_error = sup_error.max((g - v).abs());
        if v > 0.0 {
            let lhs = hot.eval(g)?.to_f64();
            identity_error = identity_error.max((lhs - (alpha * v.ln() + beta)).abs());
        }
    }
    let fit_points = xs.len();
    let mut approx = HotApproximation {
        f,
        a,
        alpha,
        beta,
        report: HotFitReport { a, alpha, beta, sup_error, identity_error, fit_points, audit: pre },
    };
    let audit = audit_curves_with(&approx, &curves, Criterion::F(&hot), opts, failures)?;
    if !audit.passed() {
        return Err(Error::ApproximationFailure { best_error: sup_error, min_slack: audit.min_slack });
    }
    approx.report.audit = audit;
    Ok(approx)
}

/// Result of comparing an `H_b`-audit of `f_b` with an `H_a`-audit of `(a/b)·f_b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaleReport {
    pub a: f64,
    pub b: f64,
    pub audit_b: AuditReport,
    pub audit_a: AuditReport,
    /// Largest difference between corresponding triple slacks.
    pub max_slack_difference: f64,
    pub passed: bool,
}

/// Checks `H_a((a/b)·f_b) = H_b(f_b)` at the level of audits: the two audits
/// see identical composed values, so their slacks agree triple by triple.
pub fn hot_rescale_check(
    f_b: &dyn ScalarField,
    b: f64,
    a: f64,
    surface: &ModelSurface,
    ball_radius: f64,
    sampler: &Sampler,
    opts: &AuditOptions,
) -> Result<RescaleReport> {
    if !(a > 0.0 && b.is_finite() && a < b) {
        return Err(Error::Domain(format!("need 0 < a < b < ∞, got a = {a}, b = {b}")));
    }
    let hb = AdmissibleFunction::hot(b)?;
    let ha = AdmissibleFunction::hot(a)?;
    let (curves, failures) = sampler.curves(surface, ball_radius)?;
    let audit_b = audit_curves_with(f_b, &curves, Criterion::F(&hb), opts, failures)?;
    if !audit_b.passed() {
        return Err(Error::Precondition(format!("f_b fails its H_b audit (min slack {:e})", audit_b.min_slack)));
    }
    let eps = a / b;
    let scaled = |xi: [f64; 2]| eps * f_b.value(xi);
    let audit_a = audit_curves_with(&scaled, &curves, Criterion::F(&ha), opts, failures)?;
    let mut diff: f64 = 0.0;
    for c in &curves {
        let vb: Vec<f64> = c.points.iter().map(|&p| f_b.value(p)).collect();
        let va: Vec<f64> = vb.iter().map(|v| eps * v).collect();
        let sb = triple_slacks(&vb, &c.taus, Criterion::F(&hb))?;
        let sa = triple_slacks(&va, &c.taus, Criterion::F(&ha))?;
        for (x, y) in sa.iter().zip(&sb) {
            if x.is_finite() || y.is_finite() {
                diff = diff.max((x - y).abs());
            } else if x != y {
                diff = f64::INFINITY;
            }
        }
    }
    let passed = audit_a.passed() && diff <= 1e-9;
    Ok(RescaleReport { a, b, audit_b, audit_a, max_slack_difference: diff, passed })
}
