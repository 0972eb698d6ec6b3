//! The curvature obstruction: a log-concave datum on a curved surface whose
//! Dirichlet heat flow loses log-concavity instantly, plus the Euclidean
//! demos of the rescaling limit and of `∞`-concavity failing.
//!
//! Indices are 0-based: `ξ¹` is coordinate 0 and `e₁` is `[1, 0]`.

mod breaking;
mod conditions;
mod constants;
mod demos;
mod psi;
mod spec;

pub use breaking::{
    breaking_experiment, breaking_gaussian_baseline, BreakingParams, BreakingPoint, BreakingReport, BreakingVerdict,
    PairVerdict, SlopeCheck,
};
pub use conditions::{
    c3_numeric, choose_delta, nsd_sweep, verify_conditions, ConditionReport, DetCheck, NsdSweep, NSD_TOL,
};
pub use constants::{
    c3_closed_form, c3_quadratic, c3_scan, choose_lambda, compute_c, gamma_hessians, working_radius, Binding,
    ConstantC, GammaHessians, C_FLOOR, C_HEADROOM, LAMBDA_HEADROOM,
};
pub use demos::{
    chord_scan, infinity_counterexample_demo, radial_bump, rescaling_experiment, Certificate, ChordScan,
    RescalingParams, RescalingReport, RescalingRow,
};
pub use psi::Psi;
pub use spec::{build_psi, Branch, CounterexampleSpec, SpecOverrides};
