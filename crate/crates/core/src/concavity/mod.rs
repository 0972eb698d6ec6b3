//! Admissible functions, sampled concavity audits along geodesics, and the
//! hot-concavity family.

mod admissible;
mod audit;
mod hot;
mod suite;

pub use admissible::{
    eval_f, eval_f_inverse, heated_step, heated_step_derivative, heated_step_inverse, AdmissibleFunction,
    AdmissibleKind, MonotoneTable,
};
pub use audit::{
    audit_along, audit_curves, audit_curves_extreme, audit_domain, audit_extremes, AuditOptions, AuditReport,
    ExtremeMode, Sampler, Verdict, Witness,
};
pub use hot::{hot_approximation, hot_rescale_check, HotApproximation, HotFitReport, RescaleReport};
pub use suite::{hierarchy_suite, seeded_test_functions, HierarchyReport, HierarchyRow, TestFunction, TestShape};
