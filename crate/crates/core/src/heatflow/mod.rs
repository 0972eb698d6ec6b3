//! Dirichlet heat flow on geodesic balls of model surfaces.
//!
//! Two discretisations share one stepping and probing layer:
//!
//! - [`PolarGrid`]: vertex-centred finite volumes in `(ρ, θ)` with a single
//!   pole node. Symmetric in the `√det g`-weighted inner product; used for
//!   baselines, eigen-decay and rescaling runs.
//! - [`ChartGrid`]: a square lattice in Cartesian normal coordinates with the
//!   nine-point non-divergence operator `g^{ij}(∂_ij − Γ^k_ij ∂_k)`. It places
//!   nodes on the `ξ¹` axis at uniform spacing through `o`, which the probes of
//!   `Hess log u` at `o` need when the signal is many orders below `u`.

mod grid;
mod operator;
mod probe;
mod semigroup;
mod solve;

pub use grid::{ChartGrid, Grid, PolarGrid};
pub use operator::{assemble_operator, SparseOperator};
pub use probe::{probe_hessian_log, ProbeValue};
pub use semigroup::{euclidean_semigroup, Density, EuclideanDatum};
pub use solve::{
    advance, solve, HeatSolution, InvariantSummary, ScalarGridField, Scheme, SolveOptions, StepDiagnostics, Stepper,
};
