use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the three constant-curvature models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Flat,
    Sphere,
    Hyperbolic,
}

/// A 2D constant-curvature surface in the normal chart at its base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSurface {
    kind: SurfaceKind,
    curvature: f64,
    chart_radius: f64,
}

/// Default chart margin on spheres, as a fraction of the conjugate radius `π/√K`.
const SPHERE_CHART_FRACTION: f64 = 0.99;
/// Margin below `π/(2√K)` for the sphere convexity guard, as a fraction of `π/√K`.
const CONVEXITY_MARGIN_FRACTION: f64 = 1e-6;

impl ModelSurface {
    /// Surface with sectional curvature `k`; the kind follows the sign.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {k}")));
        }
        Ok(if k > 0.0 {
            ModelSurface {
                kind: SurfaceKind::Sphere,
                curvature: k,
                chart_radius: SPHERE_CHART_FRACTION * std::f64::consts::PI / k.sqrt(),
            }
        } else if k < 0.0 {
            ModelSurface { kind: SurfaceKind::Hyperbolic, curvature: k, chart_radius: f64::INFINITY }
        } else {
            Self::flat()
        })
    }

    pub fn flat() -> Self {
        ModelSurface { kind: SurfaceKind::Flat, curvature: 0.0, chart_radius: f64::INFINITY }
    }

    pub fn sphere(k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!("sphere needs K > 0, got {k}")));
        }
        Self::new(k)
    }

    pub fn hyperbolic(k: f64) -> Result<Self> {
        if !(k < 0.0) {
            return Err(Error::Domain(format!("hyperbolic plane needs K < 0, got {k}")));
        }
        Self::new(k)
    }

    /// Builds the surface of the given kind; `k` must carry the matching sign.
    pub fn of_kind(kind: SurfaceKind, k: f64) -> Result<Self> {
        match kind {
            SurfaceKind::Flat if k == 0.0 => Ok(Self::flat()),
            SurfaceKind::Flat => Err(Error::Domain(format!("flat surface needs K = 0, got {k}"))),
            SurfaceKind::Sphere => Self::sphere(k),
            SurfaceKind::Hyperbolic => Self::hyperbolic(k),
        }
    }

    /// Shrinks (or, off the sphere, sets) the chart radius.
    pub fn with_chart_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("chart radius must be positive, got {r}")));
        }
        if self.kind == SurfaceKind::Sphere && r >= std::f64::consts::PI / self.curvature.sqrt() {
            return Err(Error::Domain(format!("sphere chart radius {r} reaches the antipode π/√K")));
        }
        self.chart_radius = r;
        Ok(self)
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    pub fn chart_radius(&self) -> f64 {
        self.chart_radius
    }

    /// Radius below which balls about `o` are strongly convex and minimal
    /// geodesics between their points are unique.
    pub fn convexity_radius(&self) -> f64 {
        match self.kind {
            SurfaceKind::Sphere => {
                let conj = std::f64::consts::PI / self.curvature.sqrt();
                self.chart_radius.min(0.5 * conj - CONVEXITY_MARGIN_FRACTION * conj)
            }
            _ => self.chart_radius,
        }
    }

    pub fn contains(&self, xi: [f64; 2]) -> bool {
        let rho = xi[0].hypot(xi[1]);
        rho.is_finite() && rho < self.chart_radius
    }

    pub(crate) fn check(&self, xi: [f64; 2]) -> Result<()> {
        if self.contains(xi) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "point ({}, {}) outside normal chart of radius {}",
                xi[0], xi[1], self.chart_radius
            )))
        }
    }

    /// `S_K(ρ)`, the length of the geodesic circle of radius `ρ` divided by 2π.
    pub fn s_k(&self, rho: f64) -> f64 {
        let (a, ..) = radial_profile(self.curvature * rho * rho);
        rho * a.sqrt()
    }

    /// `S_K'(ρ)`: `cos(√Kρ)`, `1`, or `cosh(√−Kρ)`.
    pub fn s_k_prime(&self, rho: f64) -> f64 {
        let k = self.curvature;
        if k > 0.0 {
            (k.sqrt() * rho).cos()
        } else if k < 0.0 {
            ((-k).sqrt() * rho).cosh()
        } else {
            1.0
        }
    }

    /// `∫₀^ρ S_K`, the area of the geodesic disk of radius `ρ` divided by 2π.
    pub fn disk_area_factor(&self, rho: f64) -> f64 {
        let (a, ..) = radial_profile(0.25 * self.curvature * rho * rho);
        0.5 * rho * rho * a
    }
}

/// A point of the normal chart in Cartesian coordinates `(ξ¹, ξ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalPoint {
    pub xi: [f64; 2],
}

impl NormalPoint {
    pub fn new(x: f64, y: f64) -> Self {
        NormalPoint { xi: [x, y] }
    }

    pub fn origin() -> Self {
        NormalPoint { xi: [0.0, 0.0] }
    }

    pub fn from_polar(rho: f64, theta: f64) -> Self {
        NormalPoint { xi: [rho * theta.cos(), rho * theta.sin()] }
    }

    pub fn rho(&self) -> f64 {
        self.xi[0].hypot(self.xi[1])
    }
}

impl From<[f64; 2]> for NormalPoint {
    fn from(xi: [f64; 2]) -> Self {
        NormalPoint { xi }
    }
}

const SERIES_CUTOFF: f64 = 1.0;
const SERIES_TERMS: usize = 18;

/// Coefficients `c_j = (−1)^j 2·4^j/(2j+2)!` of `a(x) = sin²√x / x`.
fn series_coeff(j: usize) -> f64 {
    let mut c = 2.0;
    for m in 1..=(2 * j + 2) {
        c /= m as f64;
    }
    c *= 4f64.powi(j as i32);
    if j % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Returns `(a, a_x, β, β_x)` at `x = Kρ²`, with `a = S_K²/ρ²` and `β = (1 − a)/x`.
pub(crate) fn radial_profile(x: f64) -> (f64, f64, f64, f64) {
    if x.abs() < SERIES_CUTOFF {
        radial_series(x)
    } else {
        radial_closed(x)
    }
}

fn radial_series(x: f64) -> (f64, f64, f64, f64) {
    let mut a = 0.0;
    let mut ax = 0.0;
    let mut b = 0.0;
    let mut bx = 0.0;
    let mut pow = 1.0;
    let mut pow_prev = 0.0;
    for j in 0..SERIES_TERMS {
        let cj = series_coeff(j);
        let cj1 = series_coeff(j + 1);
        a += cj * pow;
        b -= cj1 * pow;
        if j >= 1 {
            ax += j as f64 * cj * pow_prev;
            bx -= j as f64 * cj1 * pow_prev;
        }
        pow_prev = pow;
        pow *= x;
    }
    (a, ax, b, bx)
}

fn radial_closed(x: f64) -> (f64, f64, f64, f64) {
    let y = x.abs().sqrt();
    let (s, c) = if x > 0.0 { (y.sin(), y.cos()) } else { (y.sinh(), y.cosh()) };
    let a = (s / y) * (s / y);
    let ax = (s * c / y - a) / x;
    let b = (1.0 - a) / x;
    let bx = -(ax + b) / x;
    (a, ax, b, bx)
}

/// Metric, inverse metric and volume density at a chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAt {
    pub g: [[f64; 2]; 2],
    pub g_inv: [[f64; 2]; 2],
    pub sqrt_det: f64,
}

/// `g_ij(ξ)` in Cartesian normal coordinates, with its inverse and `√det g`.
pub fn metric_at(surface: &ModelSurface, p: NormalPoint) -> Result<MetricAt> {
    surface.check(p.xi)?;
    let k = surface.curvature;
    let xi = p.xi;
    let (a, _, beta, _) = radial_profile(k * (xi[0] * xi[0] + xi[1] * xi[1]));
    let b = k * beta;
    let c = -b / a;
    let mut g = [[0.0; 2]; 2];
    let mut g_inv = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let d = if i == j { 1.0 } else { 0.0 };
            g[i][j] = a * d + b * xi[i] * xi[j];
            g_inv[i][j] = d / a + c * xi[i] * xi[j];
        }
    }
    Ok(MetricAt { g, g_inv, sqrt_det: a.sqrt() })
}

/// Christoffel symbols `Γ^k_ij`, stored as `gamma[k][i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    pub gamma: [[[f64; 2]; 2]; 2],
}

impl Christoffel {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][i][j]
    }

    /// `Σ_k Γ^k_ij w_k` for a covector `w`.
    pub fn contract(&self, w: [f64; 2]) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.gamma[0][i][j] * w[0] + self.gamma[1][i][j] * w[1];
            }
        }
        out
    }
}

/// Closed-form `Γ^k_ij(ξ)`.
///
/// With `g = a I + b ξξᵀ` and `∂_l a = A ξ_l`, `∂_l b = B ξ_l`, the Levi-Civita
/// formula collapses to
/// `Γ^k_ij = P (ξ_i δ_jk + ξ_j δ_ik) + Q δ_ij ξ_k + T ξ_i ξ_j ξ_k`.
pub fn christoffel_at(surface: &ModelSurface, p: NormalPoint) -> Result<Christoffel> {
    surface.check(p.xi)?;
    let k = surface.curvature;
    let xi = p.xi;
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    let (a, ax, beta, bx) = radial_profile(k * r2);
    let big_a = 2.0 * k * ax;
    let big_b = 2.0 * k * k * bx;
    let b = k * beta;
    let c = -b / a;
    let pp = big_a / (2.0 * a);
    let q = b - 0.5 * big_a;
    let t = big_b / (2.0 * a) + c * (big_a + 0.5 * big_b * r2);
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for (kk, table) in gamma.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                let dik = if i == kk { 1.0 } else { 0.0 };
                let djk = if j == kk { 1.0 } else { 0.0 };
                let dij = if i == j { 1.0 } else { 0.0 };
                table[i][j] = pp * (xi[i] * djk + xi[j] * dik) + q * dij * xi[kk] + t * xi[i] * xi[j] * xi[kk];
            }
        }
    }
    Ok(Christoffel { gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_branches_agree_at_cutoff() {
        for &x in &[0.999_999, -0.999_999, 0.5, -0.5] {
            let s = radial_series(x);
            let c = radial_closed(x);
            assert!((s.0 - c.0).abs() < 1e-14);
            assert!((s.1 - c.1).abs() < 1e-13);
            assert!((s.2 - c.2).abs() < 1e-13);
            assert!((s.3 - c.3).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_at_zero() {
        let (a, ax, b, bx) = radial_profile(0.0);
        assert_eq!(a, 1.0);
        assert!((ax + 1.0 / 3.0).abs() < 1e-16);
        assert!((b - 1.0 / 3.0).abs() < 1e-16);
        assert!((bx + 2.0 / 45.0).abs() < 1e-16);
    }

    #[test]
    fn sphere_rejects_antipodal_chart() {
        let s = ModelSurface::sphere(1.0).unwrap();
        assert!(s.with_chart_radius(std::f64::consts::PI).is_err());
        assert!(s.chart_radius() < std::f64::consts::PI);
    }

    #[test]
    fn disk_area_matches_closed_form() {
        let s = ModelSurface::sphere(1.0).unwrap();
        let r: f64 = 0.7;
        assert!((s.disk_area_factor(r) - (1.0 - r.cos())).abs() < 1e-15);
        let h = ModelSurface::hyperbolic(-1.0).unwrap();
        assert!((h.disk_area_factor(r) - (r.cosh() - 1.0)).abs() < 1e-15);
    }
}
