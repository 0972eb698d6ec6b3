use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::admissible::AdmissibleFunction;
use super::audit::{audit_curves, audit_curves_extreme, AuditOptions, ExtremeMode, Sampler};
use crate::error::{Error, Result};
use crate::geometry::{ModelSurface, ScalarField};

/// Shape of a seeded log-concave test function, centred at `m` with
/// quadratic form `q(ξ) = (ξ−m)ᵀA(ξ−m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TestShape {
    /// `exp(−q − c q²)`: log-concave, not `α`-concave for `α > 0`.
    Gaussian { quartic: f64 },
    /// `max(0, 1 − q)^p`: `(1/p)`-concave.
    Power { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub shape: TestShape,
    pub m: [f64; 2],
    pub a: [[f64; 2]; 2],
}

impl TestFunction {
    fn q(&self, xi: [f64; 2]) -> f64 {
        let d = [xi[0] - self.m[0], xi[1] - self.m[1]];
        self.a[0][0] * d[0] * d[0] + 2.0 * self.a[0][1] * d[0] * d[1] + self.a[1][1] * d[1] * d[1]
    }

    pub fn label(&self) -> String {
        match self.shape {
            TestShape::Gaussian { quartic } => format!("gaussian(c={quartic:.3})"),
            TestShape::Power { p } => format!("power(p={p:.3})"),
        }
    }
}

impl ScalarField for TestFunction {
    fn value(&self, xi: [f64; 2]) -> f64 {
        let q = self.q(xi);
        match self.shape {
            TestShape::Gaussian { quartic } => (-q - quartic * q * q).exp(),
            TestShape::Power { p } => (1.0 - q).max(0.0).powf(p),
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> [[f64; 2]; 2] {
    let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (c, s) = (th.cos(), th.sin());
    let l1: f64 = rng.gen_range(lo..hi);
    let l2: f64 = rng.gen_range(lo..hi);
    [[l1 * c * c + l2 * s * s, (l1 - l2) * c * s], [(l1 - l2) * c * s, l1 * s * s + l2 * c * c]]
}

/// `count` log-concave test functions: the first half Gaussian-type, the rest
/// power-type with `p ∈ [0.5, 3]`.
pub fn seeded_test_functions(seed: u64, count: usize) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let r: f64 = 0.3 * rng.gen::<f64>().sqrt();
            let th: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let m = [r * th.cos(), r * th.sin()];
            if k < count / 2 {
                let a = random_form(&mut rng, 0.3, 3.0);
                let quartic = if k % 2 == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
                TestFunction { shape: TestShape::Gaussian { quartic }, m, a }
            } else {
                let a = random_form(&mut rng, 0.5, 2.0);
                TestFunction { shape: TestShape::Power { p: rng.gen_range(0.5..3.0) }, m, a }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyRow {
    pub function: TestFunction,
    pub label: String,
    /// Audit verdicts in the order of [`HierarchyReport::alphas`].
    pub alpha_pass: Vec<bool>,
    pub min_slacks: Vec<f64>,
    pub quasi_pass: bool,
    /// Pairs `(α, β)` with `β ≤ α`, `α` passing and `β` failing; `β = −∞`
    /// stands for quasi-concavity.
    pub violations: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyReport {
    pub alphas: Vec<f64>,
    pub rows: Vec<HierarchyRow>,
    pub violations: usize,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Audit each function against `Φ_α` for every `α` and against
/// quasi-concavity on a shared curve sample, and count breaches of
/// "`Φ_α` passes ⇒ `Φ_β` passes for `β ≤ α` ⇒ quasi passes".
pub fn hierarchy_suite(
    functions: &[TestFunction],
    alphas: &[f64],
    surface: &ModelSurface,
    radius: f64,
    sampler: &Sampler,
    opts: &AuditOptions,
) -> Result<HierarchyReport> {
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain("α grid must be finite".into()));
    }
    let (curves, _) = sampler.curves(surface, radius)?;
    let fs: Vec<AdmissibleFunction> = alphas.iter().map(|&a| AdmissibleFunction::power(a)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(functions.len());
    let mut total = 0;
    for f in functions {
        let mut alpha_pass = Vec::with_capacity(alphas.len());
        let mut min_slacks = Vec::with_capacity(alphas.len());
        for big_f in &fs {
            let r = audit_curves(f, big_f, &curves, opts)?;
            alpha_pass.push(r.passed());
            min_slacks.push(r.min_slack);
        }
        let quasi_pass = audit_curves_extreme(f, ExtremeMode::Quasi, &curves, opts)?.passed();
        let mut violations = Vec::new();
        for (i, &a) in alphas.iter().enumerate() {
            if !alpha_pass[i] {
                continue;
            }
            for (j, &b) in alphas.iter().enumerate() {
                if b <= a && !alpha_pass[j] {
                    violations.push((a, b));
                }
            }
            if !quasi_pass {
                violations.push((a, f64::NEG_INFINITY));
            }
        }
        total += violations.len();
        rows.push(HierarchyRow { function: *f, label: f.label(), alpha_pass, min_slacks, quasi_pass, violations });
    }
    Ok(HierarchyReport { alphas: alphas.to_vec(), rows, violations: total })
}
