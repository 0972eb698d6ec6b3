use super::surface::{christoffel_at, metric_at, ModelSurface, NormalPoint};
use crate::error::{Error, Result};

/// Value, coordinate gradient and coordinate Hessian of a scalar at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

/// A scalar function on the normal chart.
///
/// Implementors that know their derivatives in closed form override
/// [`ScalarField::jet`]; everything else is differentiated numerically.
pub trait ScalarField: Sync {
    fn value(&self, xi: [f64; 2]) -> f64;

    fn jet(&self, _xi: [f64; 2]) -> Option<Jet> {
        None
    }
}

impl<F: Fn([f64; 2]) -> f64 + Sync> ScalarField for F {
    fn value(&self, xi: [f64; 2]) -> f64 {
        self(xi)
    }
}

/// Finite-difference step: `max(1e−4, 1e−5·chart_radius)`, or `1e−4` on
/// unbounded charts.
pub fn fd_step(surface: &ModelSurface) -> f64 {
    let r = surface.chart_radius();
    if r.is_finite() {
        (1e-5 * r).max(1e-4)
    } else {
        1e-4
    }
}

/// Coordinate jet of `f` at `p`: exact when `f` provides it, otherwise central
/// differences with step [`fd_step`].
pub fn coordinate_jet(surface: &ModelSurface, f: &dyn ScalarField, p: NormalPoint) -> Result<Jet> {
    surface.check(p.xi)?;
    if let Some(j) = f.jet(p.xi) {
        return Ok(j);
    }
    let h = fd_step(surface);
    let x = p.xi;
    let at = |dx: f64, dy: f64| -> Result<f64> {
        let q = [x[0] + dx, x[1] + dy];
        if !surface.contains(q) {
            return Err(Error::Domain(format!("difference stencil at ({}, {}) leaves the chart", x[0], x[1])));
        }
        Ok(f.value(q))
    };
    let f0 = at(0.0, 0.0)?;
    let fxp = at(h, 0.0)?;
    let fxm = at(-h, 0.0)?;
    let fyp = at(0.0, h)?;
    let fym = at(0.0, -h)?;
    let fpp = at(h, h)?;
    let fpm = at(h, -h)?;
    let fmp = at(-h, h)?;
    let fmm = at(-h, -h)?;
    let h2 = h * h;
    let fxy = (fpp - fpm - fmp + fmm) / (4.0 * h2);
    Ok(Jet {
        value: f0,
        grad: [(fxp - fxm) / (2.0 * h), (fyp - fym) / (2.0 * h)],
        hess: [[(fxp - 2.0 * f0 + fxm) / h2, fxy], [fxy, (fyp - 2.0 * f0 + fym) / h2]],
    })
}

/// `[Hess_M f(∂_i, ∂_j)] = ∂_ij f − Γ^k_ij ∂_k f` at `p`.
pub fn covariant_hessian_matrix(surface: &ModelSurface, f: &dyn ScalarField, p: NormalPoint) -> Result<[[f64; 2]; 2]> {
    let j = coordinate_jet(surface, f, p)?;
    let g = christoffel_at(surface, p)?;
    let corr = g.contract(j.grad);
    let mut h = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            h[a][b] = j.hess[a][b] - corr[a][b];
        }
    }
    Ok(h)
}

/// `Hess_M f(v, w)` at `p`, for coordinate vectors `v`, `w`.
pub fn covariant_hessian(
    surface: &ModelSurface,
    f: &dyn ScalarField,
    p: NormalPoint,
    v: [f64; 2],
    w: [f64; 2],
) -> Result<f64> {
    let h = covariant_hessian_matrix(surface, f, p)?;
    let mut s = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            s += h[a][b] * v[a] * w[b];
        }
    }
    Ok(s)
}

/// `Δ_M f = g^{ij} Hess_M f(∂_i, ∂_j)` at `p`.
pub fn laplace_beltrami(surface: &ModelSurface, f: &dyn ScalarField, p: NormalPoint) -> Result<f64> {
    let h = covariant_hessian_matrix(surface, f, p)?;
    let m = metric_at(surface, p)?;
    let mut s = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            s += m.g_inv[a][b] * h[a][b];
        }
    }
    Ok(s)
}

/// `g(∇_M f, ∇_M f) = g^{ij} ∂_i f ∂_j f` at `p`.
pub fn grad_norm_sq(surface: &ModelSurface, f: &dyn ScalarField, p: NormalPoint) -> Result<f64> {
    let j = coordinate_jet(surface, f, p)?;
    let m = metric_at(surface, p)?;
    let mut s = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            s += m.g_inv[a][b] * j.grad[a] * j.grad[b];
        }
    }
    Ok(s)
}
