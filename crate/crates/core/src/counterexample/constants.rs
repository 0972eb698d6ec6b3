use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{christoffel_at, CurvatureData, ModelSurface, NormalPoint, SurfaceKind};

/// Headroom on `C` over the binding lower bound.
pub const C_HEADROOM: f64 = 1.05;
/// Factor applied to the larger root of the `c3` quadratic.
pub const LAMBDA_HEADROOM: f64 = 1.5;
/// `C` used when both lower bounds vanish (flat data).
pub const C_FLOOR: f64 = 1e-3;

/// Second derivatives at `o` of the Christoffel symbols entering the
/// construction, in the adapted basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaHessians {
    /// `[Σ_{k∈I₊} ∂_ab Γ^k_11(o)]_{a,b}`.
    pub iplus_11: Vec<Vec<f64>>,
    /// `Σ_{k∈I₊} Σ_i ∂_11 Γ^k_ii(o)`.
    pub iplus_trace_e1: f64,
}

impl GammaHessians {
    pub fn zero(n: usize) -> Self {
        GammaHessians { iplus_11: vec![vec![0.0; n]; n], iplus_trace_e1: 0.0 }
    }
}

/// Radius of the ball on which the construction is carried out:
/// `min(convexity radius, 1.5/√|K|)`, or `1` on the flat surface.
pub fn working_radius(surface: &ModelSurface) -> f64 {
    match surface.kind() {
        SurfaceKind::Flat => 1.0,
        _ => surface.convexity_radius().min(1.5 / surface.curvature().abs().sqrt()),
    }
}

fn check_adapted(curv: &CurvatureData) -> Result<()> {
    for (a, e) in curv.basis().iter().enumerate() {
        for (b, x) in e.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            if (x - want).abs() > 1e-12 {
                return Err(Error::Precondition(
                    "curvature basis differs from the chart basis; rotate the chart first".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Hessians at `o` of the model-surface Christoffel symbols, by fourth-order
/// central differences with step `1e-3·min(chart radius, 1)`. Since `Γ(o) = 0`
/// these are also the covariant Hessians.
pub fn gamma_hessians(surface: &ModelSurface, curv: &CurvatureData) -> Result<GammaHessians> {
    check_adapted(curv)?;
    if curv.n() != 2 {
        return Err(Error::InsufficientData("Christoffel Hessians are available for surfaces only".into()));
    }
    let h = 1e-3 * surface.chart_radius().min(1.0);
    let gam = |x: f64, y: f64, k: usize, i: usize, j: usize| -> Result<f64> {
        Ok(christoffel_at(surface, NormalPoint { xi: [x, y] })?.get(k, i, j))
    };
    let d2 = |k: usize, i: usize, j: usize, a: usize, b: usize| -> Result<f64> {
        let e = |c: usize, s: f64| if c == 0 { [s, 0.0] } else { [0.0, s] };
        let at = |s: f64, t: f64| -> Result<f64> {
            let p = e(a, s);
            let q = e(b, t);
            gam(p[0] + q[0], p[1] + q[1], k, i, j)
        };
        if a == b {
            let f = |s: f64| at(s, 0.0);
            Ok((-f(2.0 * h)? + 16.0 * f(h)? - 30.0 * f(0.0)? + 16.0 * f(-h)? - f(-2.0 * h)?) / (12.0 * h * h))
        } else {
            let w = [(1.0, 8.0), (2.0, -1.0)];
            let mut acc = 0.0;
            for &(s, ws) in &w {
                for &(t, wt) in &w {
                    let v = at(s * h, t * h)? - at(s * h, -t * h)? - at(-s * h, t * h)? + at(-s * h, -t * h)?;
                    acc += ws * wt * v;
                }
            }
            Ok(acc / (144.0 * h * h))
        }
    };
    let mut out = GammaHessians::zero(2);
    for k in curv.i_plus() {
        for a in 0..2 {
            for b in 0..2 {
                out.iplus_11[a][b] += d2(k, 0, 0, a, b)?;
            }
        }
        for i in 0..2 {
            out.iplus_trace_e1 += d2(k, i, i, 0, 0)?;
        }
    }
    Ok(out)
}

/// Which lower bound on `C` was binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// `C g(v,v) + ½ Σ_{I₊} Hess Γ^k_11(v,v) ≥ 0`.
    ChristoffelHessian,
    /// `(n−1)(κ_i 𝟙_{I₊}(i) + n^{3/2} max|R_{1ℓki}|)² ≤ C`.
    CurvatureBound,
    /// Both bounds vanish; a positive floor is used.
    Floor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantC {
    pub value: f64,
    pub gamma_bound: f64,
    pub curvature_bound: f64,
    pub binding: Binding,
}

/// The constant `C`: 5% above the larger of its two lower bounds.
///
/// `gamma` may be omitted only when `I₊ = ∅`, where the Christoffel term is
/// an empty sum.
pub fn compute_c(curv: &CurvatureData, gamma: Option<&GammaHessians>) -> Result<ConstantC> {
    let n = curv.n();
    let iplus = curv.i_plus();
    let gamma_bound = if iplus.is_empty() {
        0.0
    } else {
        let g = gamma
            .ok_or_else(|| Error::InsufficientData("Christoffel Hessians are required when I₊ is nonempty".into()))?;
        // C ≥ −½ λ_min(M)
        let m = nalgebra::DMatrix::from_fn(n, n, |a, b| 0.5 * (g.iplus_11[a][b] + g.iplus_11[b][a]));
        let lmin = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        (-0.5 * lmin).max(0.0)
    };
    let n32 = (n as f64).powf(1.5);
    let mut curvature_bound: f64 = 0.0;
    for i in 1..n {
        let mut rmax: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                rmax = rmax.max(curv.r(0, l, k, i).abs());
            }
        }
        let ki = if curv.in_i_plus(i) { curv.kappa()[i] } else { 0.0 };
        curvature_bound = curvature_bound.max((n - 1) as f64 * (ki + n32 * rmax).powi(2));
    }
    let (value, binding) = if gamma_bound == 0.0 && curvature_bound == 0.0 {
        (C_FLOOR, Binding::Floor)
    } else if gamma_bound > curvature_bound {
        (C_HEADROOM * gamma_bound, Binding::ChristoffelHessian)
    } else {
        (C_HEADROOM * curvature_bound, Binding::CurvatureBound)
    };
    Ok(ConstantC { value, gamma_bound, curvature_bound, binding })
}

/// Coefficients `[A₂, A₁, A₀]` of `Hess(Δψ + |∇ψ|²)(e₁,e₁)(o) = A₂λ² + A₁λ + A₀`.
pub fn c3_quadratic(curv: &CurvatureData, c: f64, gamma: &GammaHessians) -> [f64; 3] {
    let n = curv.n() as f64;
    let a2 = (4.0 / 3.0)
        * (1..curv.n()).map(|i| curv.kappa()[i] * (-1.0 + if curv.in_i_plus(i) { 3.0 } else { 0.0 })).sum::<f64>();
    let a1 = -4.0 * (c * (n + 5.0) + 0.5 * gamma.iplus_trace_e1);
    let a0 = -4.0 * c * (n + 5.0);
    [a2, a1, a0]
}

/// Closed-form `Hess(Δψ + |∇ψ|²)(e₁,e₁)(o)` at `λ`.
pub fn c3_closed_form(curv: &CurvatureData, c: f64, gamma: &GammaHessians, lambda: f64) -> f64 {
    let [a2, a1, a0] = c3_quadratic(curv, c, gamma);
    (a2 * lambda + a1) * lambda + a0
}

/// `λ = 1.5 ×` the larger root of the `c3` quadratic.
///
/// With all `κ_i = 0` the leading coefficient vanishes and the expression is
/// negative for every `λ > 0`: reported as [`Error::DegenerateCurvature`].
pub fn choose_lambda(curv: &CurvatureData, c: f64, gamma: &GammaHessians) -> Result<f64> {
    let [a2, a1, a0] = c3_quadratic(curv, c, gamma);
    if !(a2 > 0.0) {
        return Err(Error::DegenerateCurvature);
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    let root = if disc < 0.0 { 0.0 } else { (-a1 + disc.sqrt()) / (2.0 * a2) };
    let lambda = LAMBDA_HEADROOM * root.max(1.0 / LAMBDA_HEADROOM);
    Ok(lambda.max(1.0 + f64::EPSILON))
}

/// `(λ, c3(λ))` over a scan of `λ` values.
pub fn c3_scan(curv: &CurvatureData, c: f64, gamma: &GammaHessians, lambdas: &[f64]) -> Vec<(f64, f64)> {
    lambdas.iter().map(|&l| (l, c3_closed_form(curv, c, gamma, l))).collect()
}
