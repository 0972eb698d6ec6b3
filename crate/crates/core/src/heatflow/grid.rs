use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{metric_at, ModelSurface, NormalPoint};

/// Polar node layout on the geodesic ball `B(R)`.
///
/// Nodes sit at `ρ_i = i·R/n_rho`, `θ_j = 2πj/n_theta`. The pole is a single
/// unknown (index 0); ring `i ∈ [1, n_rho)` at angle `j` has index
/// `1 + (i−1)·n_theta + j`; the ring `i = n_rho` is Dirichlet and eliminated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarGrid {
    surface: ModelSurface,
    radius: f64,
    n_rho: usize,
    n_theta: usize,
}

/// Cartesian lattice `ξ = (i·h, j·h)`, `h = R/n`, with unknowns at `|ξ| < R`.
///
/// Lattice nodes with `|ξ| ≥ R` carry the Dirichlet value 0 (staircase
/// boundary).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartGrid {
    surface: ModelSurface,
    radius: f64,
    n: usize,
    #[serde(skip)]
    index: Vec<Option<usize>>,
    #[serde(skip)]
    nodes: Vec<(i64, i64)>,
}

fn check_radius(surface: &ModelSurface, radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius <= surface.convexity_radius()) {
        return Err(Error::Domain(format!(
            "solve radius {radius} outside the chart guard {}",
            surface.convexity_radius()
        )));
    }
    Ok(())
}

impl PolarGrid {
    pub fn new(surface: ModelSurface, radius: f64, n_rho: usize, n_theta: usize) -> Result<Self> {
        check_radius(&surface, radius)?;
        if n_rho < 32 || n_theta < 64 || n_theta % 2 != 0 {
            return Err(Error::Domain(format!(
                "polar grid needs n_rho ≥ 32 and even n_theta ≥ 64 (got {n_rho}, {n_theta})"
            )));
        }
        Ok(PolarGrid { surface, radius, n_rho, n_theta })
    }

    pub fn surface(&self) -> &ModelSurface {
        &self.surface
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_rho(&self) -> usize {
        self.n_rho
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn h_rho(&self) -> f64 {
        self.radius / self.n_rho as f64
    }

    pub fn h_theta(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_theta as f64
    }

    pub fn len(&self) -> usize {
        1 + (self.n_rho - 1) * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i < self.n_rho);
        1 + (i - 1) * self.n_theta + (j % self.n_theta)
    }

    /// `(i, j)` of an unknown; the pole reports `(0, 0)`.
    pub fn ring_angle(&self, k: usize) -> (usize, usize) {
        if k == 0 {
            (0, 0)
        } else {
            (1 + (k - 1) / self.n_theta, (k - 1) % self.n_theta)
        }
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.ring_angle(k);
        let rho = i as f64 * self.h_rho();
        let th = j as f64 * self.h_theta();
        [rho * th.cos(), rho * th.sin()]
    }

    /// Finite-volume cell areas `∫ √det g dξ`.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.h_rho();
        let ht = self.h_theta();
        let j = |r: f64| self.surface.disk_area_factor(r);
        let mut w = Vec::with_capacity(self.len());
        w.push(2.0 * std::f64::consts::PI * j(0.5 * h));
        for i in 1..self.n_rho {
            let rho = i as f64 * h;
            let a = ht * (j(rho + 0.5 * h) - j(rho - 0.5 * h));
            for _ in 0..self.n_theta {
                w.push(a);
            }
        }
        w
    }

    /// Value on ring `i` (may be negative or `n_rho`) at angle `θ`, by
    /// 4-point periodic Lagrange interpolation in `θ`.
    fn ring_value(&self, values: &[f64], i: i64, theta: f64) -> f64 {
        if i < 0 {
            return self.ring_value(values, -i, theta + std::f64::consts::PI);
        }
        if i == 0 {
            return values[0];
        }
        if i as usize >= self.n_rho {
            return 0.0;
        }
        let nt = self.n_theta as i64;
        let s = theta.rem_euclid(2.0 * std::f64::consts::PI) / self.h_theta();
        let sr = s.round();
        if (s - sr).abs() < 1e-9 {
            return values[self.index(i as usize, (sr as i64).rem_euclid(nt) as usize)];
        }
        let j0 = s.floor() as i64 - 1;
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (s - (j0 + b) as f64) / ((a - b) as f64);
                }
            }
            acc += w * values[self.index(i as usize, (j0 + a).rem_euclid(nt) as usize)];
        }
        acc
    }

    /// Bicubic Lagrange interpolation in `(ρ, θ)` with the pole symmetry
    /// `(−ρ, θ) ≡ (ρ, θ + π)`.
    pub fn interpolate(&self, values: &[f64], xi: [f64; 2]) -> Result<f64> {
        let rho = xi[0].hypot(xi[1]);
        if rho > self.radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("interpolation point at ρ = {rho} outside the grid")));
        }
        let theta = xi[1].atan2(xi[0]);
        let r = rho / self.h_rho();
        let rr = r.round();
        if (r - rr).abs() < 1e-9 {
            return Ok(self.ring_value(values, rr as i64, theta));
        }
        let i0 = (r.floor() as i64 - 1).min(self.n_rho as i64 - 3);
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (r - (i0 + b) as f64) / ((a - b) as f64);
                }
            }
            acc += w * self.ring_value(values, i0 + a, theta);
        }
        Ok(acc)
    }
}

impl ChartGrid {
    pub fn new(surface: ModelSurface, radius: f64, n: usize) -> Result<Self> {
        check_radius(&surface, radius)?;
        if n < 8 {
            return Err(Error::Domain(format!("chart grid needs n ≥ 8 cells per radius, got {n}")));
        }
        let side = 2 * n + 1;
        let mut index = vec![None; side * side];
        let mut nodes = Vec::new();
        let nn = (n * n) as i64;
        for i in -(n as i64)..=(n as i64) {
            for j in -(n as i64)..=(n as i64) {
                if i * i + j * j < nn {
                    index[((i + n as i64) as usize) * side + (j + n as i64) as usize] = Some(nodes.len());
                    nodes.push((i, j));
                }
            }
        }
        Ok(ChartGrid { surface, radius, n, index, nodes })
    }

    pub fn surface(&self) -> &ModelSurface {
        &self.surface
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.radius / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unknown index of lattice node `(i, j)`, or `None` on/outside the boundary.
    pub fn index_of(&self, i: i64, j: i64) -> Option<usize> {
        let n = self.n as i64;
        if i.abs() > n || j.abs() > n {
            return None;
        }
        let side = 2 * self.n + 1;
        self.index[((i + n) as usize) * side + (j + n) as usize]
    }

    pub fn lattice(&self, k: usize) -> (i64, i64) {
        self.nodes[k]
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.nodes[k];
        [i as f64 * self.h(), j as f64 * self.h()]
    }

    /// `h²·√det g` at each node.
    pub fn weights(&self) -> Vec<f64> {
        let h2 = self.h() * self.h();
        (0..self.len())
            .map(|k| {
                h2 * metric_at(&self.surface, NormalPoint { xi: self.point(k) }).map(|m| m.sqrt_det).unwrap_or(0.0)
            })
            .collect()
    }

    fn node_value(&self, values: &[f64], i: i64, j: i64) -> f64 {
        self.index_of(i, j).map_or(0.0, |k| values[k])
    }

    /// Bicubic Lagrange interpolation on the lattice (zero outside the ball).
    pub fn interpolate(&self, values: &[f64], xi: [f64; 2]) -> Result<f64> {
        if xi[0].hypot(xi[1]) > self.radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("interpolation point ({}, {}) outside the grid", xi[0], xi[1])));
        }
        let h = self.h();
        let s = [xi[0] / h, xi[1] / h];
        let snapped = |x: f64| if (x - x.round()).abs() < 1e-9 { Some(x.round() as i64) } else { None };
        let weights = |x: f64| -> Vec<(i64, f64)> {
            if let Some(i) = snapped(x) {
                return vec![(i, 1.0)];
            }
            let i0 = x.floor() as i64 - 1;
            (0..4)
                .map(|a| {
                    let mut w = 1.0;
                    for b in 0..4 {
                        if a != b {
                            w *= (x - (i0 + b) as f64) / ((a - b) as f64);
                        }
                    }
                    (i0 + a, w)
                })
                .collect()
        };
        let wx = weights(s[0]);
        let wy = weights(s[1]);
        let mut acc = 0.0;
        for &(i, a) in &wx {
            for &(j, b) in &wy {
                acc += a * b * self.node_value(values, i, j);
            }
        }
        Ok(acc)
    }
}

/// Either discretisation of the solve ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Grid {
    Polar(PolarGrid),
    Chart(ChartGrid),
}

impl Grid {
    pub fn surface(&self) -> &ModelSurface {
        match self {
            Grid::Polar(g) => &g.surface,
            Grid::Chart(g) => &g.surface,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            Grid::Polar(g) => g.radius,
            Grid::Chart(g) => g.radius,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Polar(g) => g.len(),
            Grid::Chart(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest spacing along a coordinate line through `o`.
    pub fn spacing(&self) -> f64 {
        match self {
            Grid::Polar(g) => g.h_rho(),
            Grid::Chart(g) => g.h(),
        }
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        match self {
            Grid::Polar(g) => g.point(k),
            Grid::Chart(g) => g.point(k),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        match self {
            Grid::Polar(g) => g.weights(),
            Grid::Chart(g) => g.weights(),
        }
    }

    pub fn interpolate(&self, values: &[f64], xi: [f64; 2]) -> Result<f64> {
        match self {
            Grid::Polar(g) => g.interpolate(values, xi),
            Grid::Chart(g) => g.interpolate(values, xi),
        }
    }

    /// Nodal samples of `phi` at every unknown.
    pub fn sample(&self, phi: &dyn Fn([f64; 2]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|k| phi(self.point(k))).collect()
    }

    /// Whether `√det g`-weighted symmetry is expected of the assembled operator.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Grid::Polar(_))
    }

    /// Relative tolerance of the discrete mass-monotonicity check. The chart
    /// operator is in non-divergence form, so its discrete mass is conserved
    /// only up to truncation error.
    pub fn mass_tolerance(&self) -> f64 {
        match self {
            Grid::Polar(_) => 1e-10,
            Grid::Chart(_) => 1e-5,
        }
    }
}
