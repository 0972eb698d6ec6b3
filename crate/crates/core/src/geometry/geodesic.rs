use serde::Serialize;

use super::surface::{christoffel_at, ModelSurface, NormalPoint, SurfaceKind};
use crate::error::{Error, Result};

/// A geodesic sampled at parameters `taus ⊂ [0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCurve {
    pub taus: Vec<f64>,
    pub points: Vec<[f64; 2]>,
}

impl SampledCurve {
    /// Straight segment `(1−τ)p + τq` in chart coordinates.
    pub fn segment(p: [f64; 2], q: [f64; 2], taus: &[f64]) -> Self {
        let points = taus.iter().map(|&t| [(1.0 - t) * p[0] + t * q[0], (1.0 - t) * p[1] + t * q[1]]).collect();
        SampledCurve { taus: taus.to_vec(), points }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Path {
    Line {
        p: [f64; 2],
        q: [f64; 2],
    },
    /// Great-circle arc between unit vectors of the ambient sphere.
    Sphere {
        k: f64,
        u: [f64; 3],
        v: [f64; 3],
        omega: f64,
    },
    /// Hyperbola arc between points of the unit hyperboloid.
    Hyperboloid {
        k: f64,
        u: [f64; 3],
        v: [f64; 3],
        d: f64,
    },
    /// Solution of the geodesic ODE from `p` with initial velocity `v0`.
    Shot {
        surface: ModelSurface,
        p: [f64; 2],
        v0: [f64; 2],
        steps: usize,
    },
}

/// The minimal geodesic `c: [0,1] → chart` between two points of a convex ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic {
    path: Path,
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn embed_unit(kind: SurfaceKind, k: f64, xi: [f64; 2]) -> [f64; 3] {
    let rho = xi[0].hypot(xi[1]);
    let (dir0, dir1) = if rho > 0.0 { (xi[0] / rho, xi[1] / rho) } else { (0.0, 0.0) };
    let (s, c) = match kind {
        SurfaceKind::Sphere => {
            let y = k.sqrt() * rho;
            (y.sin(), y.cos())
        }
        _ => {
            let y = (-k).sqrt() * rho;
            (y.sinh(), y.cosh())
        }
    };
    [s * dir0, s * dir1, c]
}

fn chart_of_unit(kind: SurfaceKind, k: f64, u: [f64; 3]) -> [f64; 2] {
    let m = u[0].hypot(u[1]);
    if m == 0.0 {
        return [0.0, 0.0];
    }
    let rho = match kind {
        SurfaceKind::Sphere => m.atan2(u[2]) / k.sqrt(),
        _ => m.asinh() / (-k).sqrt(),
    };
    [rho * u[0] / m, rho * u[1] / m]
}

fn geodesic_rhs(surface: &ModelSurface, y: [f64; 4]) -> Result<[f64; 4]> {
    let g = christoffel_at(surface, NormalPoint { xi: [y[0], y[1]] })?;
    let v = [y[2], y[3]];
    let mut acc = [0.0; 2];
    for (k, a) in acc.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *a -= g.gamma[k][i][j] * v[i] * v[j];
            }
        }
    }
    Ok([v[0], v[1], acc[0], acc[1]])
}

/// Classical RK4 for the geodesic ODE on `[0, t]` with `steps` steps.
fn integrate(surface: &ModelSurface, p: [f64; 2], v0: [f64; 2], t: f64, steps: usize) -> Result<[f64; 4]> {
    let mut y = [p[0], p[1], v0[0], v0[1]];
    if steps == 0 || t == 0.0 {
        return Ok(y);
    }
    let h = t / steps as f64;
    let add = |y: [f64; 4], k: [f64; 4], s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2], y[3] + s * k[3]];
    for _ in 0..steps {
        let k1 = geodesic_rhs(surface, y)?;
        let k2 = geodesic_rhs(surface, add(y, k1, 0.5 * h))?;
        let k3 = geodesic_rhs(surface, add(y, k2, 0.5 * h))?;
        let k4 = geodesic_rhs(surface, add(y, k3, h))?;
        for m in 0..4 {
            y[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }
    }
    Ok(y)
}

fn check_guard(surface: &ModelSurface, p: NormalPoint, q: NormalPoint) -> Result<()> {
    let guard = surface.convexity_radius();
    for pt in [p, q] {
        if !(pt.rho() <= guard) {
            return Err(Error::Domain(format!(
                "endpoint ({}, {}) outside the convexity guard radius {guard}",
                pt.xi[0], pt.xi[1]
            )));
        }
    }
    Ok(())
}

/// Default RK4 step count for shooting.
const SHOOT_STEPS: usize = 400;

/// Minimal geodesic from `p` to `q`.
///
/// Uses the ambient models (unit sphere, hyperboloid) in closed form and falls
/// back to shooting if the closed form leaves a residual above tolerance.
pub fn geodesic(surface: &ModelSurface, p: NormalPoint, q: NormalPoint) -> Result<Geodesic> {
    check_guard(surface, p, q)?;
    let k = surface.curvature();
    let path = match surface.kind() {
        SurfaceKind::Flat => Path::Line { p: p.xi, q: q.xi },
        // Through o geodesics are radial lines; keep them exact.
        _ if p.rho() == 0.0 || q.rho() == 0.0 => Path::Line { p: p.xi, q: q.xi },
        SurfaceKind::Sphere => {
            let u = embed_unit(SurfaceKind::Sphere, k, p.xi);
            let v = embed_unit(SurfaceKind::Sphere, k, q.xi);
            let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
            let omega = dot3(cross, cross).sqrt().atan2(dot3(u, v));
            Path::Sphere { k, u, v, omega }
        }
        SurfaceKind::Hyperbolic => {
            let u = embed_unit(SurfaceKind::Hyperbolic, k, p.xi);
            let v = embed_unit(SurfaceKind::Hyperbolic, k, q.xi);
            let w = [u[0] - v[0], u[1] - v[1], u[2] - v[2]];
            let chord = (w[0] * w[0] + w[1] * w[1] - w[2] * w[2]).max(0.0).sqrt();
            let d = 2.0 * (0.5 * chord).asinh();
            Path::Hyperboloid { k, u, v, d }
        }
    };
    let geo = Geodesic { path };
    // The closed forms are exact; fall back only if they misbehave numerically.
    let ok = [(0.0, p.xi), (1.0, q.xi)].iter().all(|(t, e)| match geo.at(*t) {
        Ok(c) => (c[0] - e[0]).hypot(c[1] - e[1]) <= 1e-10 * (1.0 + e[0].hypot(e[1])),
        Err(_) => false,
    }) && geo.at(0.5).map(|c| c[0].is_finite() && c[1].is_finite()).unwrap_or(false);
    if ok {
        Ok(geo)
    } else {
        geodesic_shooting(surface, p, q)
    }
}

/// Minimal geodesic by shooting: Newton iteration on the initial velocity with
/// a finite-difference Jacobian of the RK4 endpoint map.
pub fn geodesic_shooting(surface: &ModelSurface, p: NormalPoint, q: NormalPoint) -> Result<Geodesic> {
    check_guard(surface, p, q)?;
    let steps = SHOOT_STEPS;
    let mut v = [q.xi[0] - p.xi[0], q.xi[1] - p.xi[1]];
    let scale = 1.0 + q.rho().max(p.rho());
    let target = 1e-13 * scale;
    let mut miss = f64::INFINITY;
    for it in 0..40 {
        let end = integrate(surface, p.xi, v, 1.0, steps)?;
        let f = [end[0] - q.xi[0], end[1] - q.xi[1]];
        miss = f[0].hypot(f[1]);
        if miss <= target {
            return Ok(Geodesic { path: Path::Shot { surface: *surface, p: p.xi, v0: v, steps } });
        }
        let eps = 1e-7 * (1.0 + v[0].hypot(v[1]));
        let mut jac = [[0.0; 2]; 2];
        for c in 0..2 {
            let mut vp = v;
            let mut vm = v;
            vp[c] += eps;
            vm[c] -= eps;
            let ep = integrate(surface, p.xi, vp, 1.0, steps)?;
            let em = integrate(surface, p.xi, vm, 1.0, steps)?;
            jac[0][c] = (ep[0] - em[0]) / (2.0 * eps);
            jac[1][c] = (ep[1] - em[1]) / (2.0 * eps);
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > 1e-300) {
            return Err(Error::GeodesicFailure { miss, iterations: it + 1 });
        }
        let dv0 = (jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
        let dv1 = (-jac[1][0] * f[0] + jac[0][0] * f[1]) / det;
        v[0] -= dv0;
        v[1] -= dv1;
        if !(v[0].is_finite() && v[1].is_finite()) {
            return Err(Error::GeodesicFailure { miss, iterations: it + 1 });
        }
    }
    Err(Error::GeodesicFailure { miss, iterations: 40 })
}

impl Geodesic {
    /// Chart coordinates of `c(τ)`; `τ` may leave `[0,1]` slightly.
    pub fn at(&self, tau: f64) -> Result<[f64; 2]> {
        match &self.path {
            Path::Line { p, q } => Ok([(1.0 - tau) * p[0] + tau * q[0], (1.0 - tau) * p[1] + tau * q[1]]),
            Path::Sphere { k, u, v, omega } => {
                let w = if *omega < 1e-8 {
                    let mut w = [0.0; 3];
                    for m in 0..3 {
                        w[m] = (1.0 - tau) * u[m] + tau * v[m];
                    }
                    let nrm = dot3(w, w).sqrt();
                    w.map(|x| x / nrm)
                } else {
                    let a = ((1.0 - tau) * omega).sin() / omega.sin();
                    let b = (tau * omega).sin() / omega.sin();
                    [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
                };
                Ok(chart_of_unit(SurfaceKind::Sphere, *k, w))
            }
            Path::Hyperboloid { k, u, v, d } => {
                let (a, b) = if *d < 1e-8 {
                    (1.0 - tau, tau)
                } else {
                    (((1.0 - tau) * d).sinh() / d.sinh(), (tau * d).sinh() / d.sinh())
                };
                let w = [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]];
                Ok(chart_of_unit(SurfaceKind::Hyperbolic, *k, w))
            }
            Path::Shot { surface, p, v0, steps } => {
                let m = ((tau.abs() * *steps as f64).ceil() as usize).max(1);
                let y = integrate(surface, *p, *v0, tau, m)?;
                Ok([y[0], y[1]])
            }
        }
    }

    pub fn sample(&self, taus: &[f64]) -> Result<SampledCurve> {
        let points = taus.iter().map(|&t| self.at(t)).collect::<Result<Vec<_>>>()?;
        Ok(SampledCurve { taus: taus.to_vec(), points })
    }

    /// Riemannian length `d(p, q)`.
    pub fn length(&self, surface: &ModelSurface) -> f64 {
        match &self.path {
            // Flat, or a radial segment from o: chart distance is arc length.
            Path::Line { p, q } => (p[0] - q[0]).hypot(p[1] - q[1]),
            Path::Sphere { k, omega, .. } => omega / k.sqrt(),
            Path::Hyperboloid { k, d, .. } => d / (-k).sqrt(),
            Path::Shot { .. } => self.speed(surface, 0.0).unwrap_or(f64::NAN),
        }
    }

    fn velocity(&self, tau: f64, h: f64) -> Result<[f64; 2]> {
        let x = [self.at(tau - 2.0 * h)?, self.at(tau - h)?, self.at(tau + h)?, self.at(tau + 2.0 * h)?];
        let mut v = [0.0; 2];
        for m in 0..2 {
            v[m] = (x[0][m] - 8.0 * x[1][m] + 8.0 * x[2][m] - x[3][m]) / (12.0 * h);
        }
        Ok(v)
    }

    fn speed(&self, surface: &ModelSurface, tau: f64) -> Result<f64> {
        let x = self.at(tau)?;
        let v = self.velocity(tau, 1e-3)?;
        let m = super::metric_at(surface, NormalPoint { xi: x })?;
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += m.g[i][j] * v[i] * v[j];
            }
        }
        Ok(s.sqrt())
    }

    /// Maximum over 17 sample parameters of `|c̈^k + Γ^k_ij ċ^i ċ^j|`,
    /// using fourth-order differences with step `10⁻³`.
    pub fn residual(&self, surface: &ModelSurface) -> Result<f64> {
        let h = 1e-3;
        let mut worst: f64 = 0.0;
        for s in 0..=16 {
            let tau = s as f64 / 16.0;
            let x =
                [self.at(tau - 2.0 * h)?, self.at(tau - h)?, self.at(tau)?, self.at(tau + h)?, self.at(tau + 2.0 * h)?];
            let mut v = [0.0; 2];
            let mut acc = [0.0; 2];
            for m in 0..2 {
                v[m] = (x[0][m] - 8.0 * x[1][m] + 8.0 * x[3][m] - x[4][m]) / (12.0 * h);
                acc[m] = (-x[0][m] + 16.0 * x[1][m] - 30.0 * x[2][m] + 16.0 * x[3][m] - x[4][m]) / (12.0 * h * h);
            }
            let g = christoffel_at(surface, NormalPoint { xi: x[2] })?;
            for k in 0..2 {
                let mut r = acc[k];
                for i in 0..2 {
                    for j in 0..2 {
                        r += g.gamma[k][i][j] * v[i] * v[j];
                    }
                }
                worst = worst.max(r.abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn through_origin_is_straight() {
        let s = ModelSurface::sphere(1.0).unwrap();
        let g = geodesic(&s, NormalPoint::origin(), NormalPoint::new(0.4, -0.2)).unwrap();
        let c = g.at(0.25).unwrap();
        assert_eq!(c, [0.1, -0.05]);
    }

    #[test]
    fn guard_rejects_far_points() {
        let s = ModelSurface::sphere(1.0).unwrap();
        let far = NormalPoint::new(1.6, 0.0);
        assert!(matches!(geodesic(&s, NormalPoint::origin(), far), Err(Error::Domain(_))));
    }

    #[test]
    fn hyperbolic_endpoints() {
        let s = ModelSurface::hyperbolic(-1.0).unwrap();
        let p = NormalPoint::new(0.5, 0.1);
        let q = NormalPoint::new(-0.2, 0.7);
        let g = geodesic(&s, p, q).unwrap();
        let a = g.at(0.0).unwrap();
        let b = g.at(1.0).unwrap();
        assert!((a[0] - p.xi[0]).abs() < 1e-14 && (a[1] - p.xi[1]).abs() < 1e-14);
        assert!((b[0] - q.xi[0]).abs() < 1e-14 && (b[1] - q.xi[1]).abs() < 1e-14);
    }
}
