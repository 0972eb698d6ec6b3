//! Numerical laboratory for F-concavity and Dirichlet heat flow on
//! constant-curvature model surfaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: closed-form metric, Christoffel symbols, curvature algebra,
//!   geodesics and covariant finite-difference operators in normal coordinates.
//! - [`concavity`]: admissible functions (power, hot, tabulated), sampled
//!   concavity audits along geodesics, and the hot-approximation construction.
//! - [`heatflow`]: Dirichlet heat solvers on geodesic balls (polar finite
//!   volumes and a Cartesian chart lattice), Crank–Nicolson stepping, probes of
//!   `Hess log u` at the base point, and the exact Euclidean semigroup.
//! - [`counterexample`]: the curvature-driven function `ψ` whose exponential is
//!   log-concave but loses log-concavity under the heat flow, plus the
//!   Euclidean demos (rescaling limit and the ∞-concave indicator).
//!
//! Conventions: indices are 0-based in code, so `e₁` is index `0`. The
//! curvature tensor follows `R_{1i1i} = −κ_i`, hence the sphere of curvature
//! `K` has `R_{0101} = −K`.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::excessive_precision)]

pub mod concavity;
pub mod counterexample;
pub mod error;
pub mod ext;
pub mod geometry;
pub mod heatflow;
pub mod quad;

pub use error::{Error, Result};
pub use ext::ExtReal;
