//! Metric geometry of constant-curvature model surfaces in normal coordinates.
//!
//! A model surface of curvature `K` is presented in the normal chart at a base
//! point `o` as the pullback of `dρ² + S_K(ρ)² dθ²`, with
//! `S_K(ρ) = sin(√K ρ)/√K`, `ρ`, or `sinh(√−K ρ)/√−K`. In Cartesian normal
//! coordinates `ξ = (ρ cos θ, ρ sin θ)` the metric is
//!
//! ```text
//! g_ij = a δ_ij + K β ξ_i ξ_j,    a = S_K(ρ)²/ρ²,   β = (1 − a)/(K ρ²)
//! ```
//!
//! and both `a` and `β` are entire functions of `x = Kρ²`, which keeps every
//! formula uniform across the three kinds and exact at `o`.

mod curvature;
mod geodesic;
mod operators;
mod surface;

pub use curvature::{curvature_data, CurvatureData};
pub use geodesic::{geodesic, geodesic_shooting, Geodesic, SampledCurve};
pub use operators::{
    coordinate_jet, covariant_hessian, covariant_hessian_matrix, fd_step, grad_norm_sq, laplace_beltrami, Jet,
    ScalarField,
};
pub use surface::{christoffel_at, metric_at, Christoffel, MetricAt, ModelSurface, NormalPoint, SurfaceKind};
