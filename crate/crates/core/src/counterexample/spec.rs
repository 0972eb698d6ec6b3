use serde::{Deserialize, Serialize};

use super::conditions::choose_delta;
use super::constants::{
    c3_closed_form, choose_lambda, compute_c, gamma_hessians, working_radius, Binding, ConstantC, GammaHessians,
};
use super::psi::Psi;
use crate::error::{Error, Result};
use crate::geometry::{curvature_data, CurvatureData, ModelSurface};

/// Which form of the construction ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Some `κ_i > 0`.
    PositiveCurvature,
    /// `I₊ = ∅`: all `I₊` sums vanish; the quadratic's leading coefficient
    /// comes from the negative `κ_i`.
    EmptyIPlus,
}

/// Optional replacements for the derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecOverrides {
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub delta: Option<f64>,
}

/// All data of the construction at `o`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleSpec {
    pub curv: CurvatureData,
    pub i_plus: Vec<usize>,
    pub branch: Branch,
    pub gamma: GammaHessians,
    pub c: f64,
    pub c_bounds: ConstantC,
    pub lambda: f64,
    pub delta: f64,
    /// Worst sampled eigenvalue of `Hess ψ` on `B(δ)`.
    pub nsd_margin: f64,
    pub r: f64,
    /// `c3` from the closed-form quadratic at `λ`.
    pub c3_closed_form: f64,
}

impl CounterexampleSpec {
    pub fn psi(&self) -> Psi {
        Psi::new(&self.curv, self.c, self.lambda)
    }

    /// The constants `C` and `λ` only (no `δ` search): the cheap algebra.
    pub fn algebra(
        surface: &ModelSurface,
        overrides: &SpecOverrides,
    ) -> Result<(CurvatureData, GammaHessians, ConstantC, f64)> {
        let curv = curvature_data(surface);
        let gamma = gamma_hessians(surface, &curv)?;
        let mut cc = compute_c(&curv, Some(&gamma))?;
        if let Some(c) = overrides.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Domain(format!("C override must be positive, got {c}")));
            }
            cc.value = c;
        }
        let lambda = match overrides.lambda {
            Some(l) if l > 1.0 && l.is_finite() => l,
            Some(l) => return Err(Error::Domain(format!("λ override must exceed 1, got {l}"))),
            None => choose_lambda(&curv, cc.value, &gamma)?,
        };
        Ok((curv, gamma, cc, lambda))
    }

    /// Run `curvature → C → λ → δ` on a model surface.
    pub fn build(surface: &ModelSurface, overrides: &SpecOverrides) -> Result<Self> {
        let (curv, gamma, c_bounds, lambda) = Self::algebra(surface, overrides)?;
        let c = c_bounds.value;
        let r = working_radius(surface);
        let psi = Psi::new(&curv, c, lambda);
        let (delta, nsd_margin) = match overrides.delta {
            Some(d) if d > 0.0 && d < r => {
                let sweep = super::conditions::nsd_sweep(surface, &psi, d)?;
                (d, sweep.worst_eigenvalue)
            }
            Some(d) => return Err(Error::Domain(format!("δ override must lie in (0, {r}), got {d}"))),
            None => {
                let (d, sweep) = choose_delta(surface, &psi, r)?;
                (d, sweep.worst_eigenvalue)
            }
        };
        let i_plus = curv.i_plus();
        let branch = if i_plus.is_empty() { Branch::EmptyIPlus } else { Branch::PositiveCurvature };
        let c3 = c3_closed_form(&curv, c, &gamma, lambda);
        Ok(CounterexampleSpec {
            curv,
            i_plus,
            branch,
            gamma,
            c,
            c_bounds,
            lambda,
            delta,
            nsd_margin,
            r,
            c3_closed_form: c3,
        })
    }

    pub fn binding(&self) -> Binding {
        self.c_bounds.binding
    }
}

/// The polynomial `ψ` of a spec.
pub fn build_psi(spec: &CounterexampleSpec) -> Psi {
    spec.psi()
}
