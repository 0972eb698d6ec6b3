use serde::{Deserialize, Serialize};

use super::solve::ScalarGridField;
use crate::error::{Error, Result};

/// A probed value of `Hess log u(o)(v, v)` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeValue {
    pub t: f64,
    pub value: f64,
    pub error: f64,
}

/// Estimate `Hess log u(o)(v, v)` from a grid field.
///
/// Since `g_ij(o) = δ_ij` and `Γ(o) = 0`, the Hessian at `o` is the second
/// difference of `log u` along the chart line through `v`. Differences at
/// widths `h`, `2h`, `4h` are Richardson-combined; the reported error is the
/// gap between the two extrapolants plus a rounding floor for the
/// cancellation in `log u`.
pub fn probe_hessian_log(field: &ScalarGridField, v: [f64; 2], h: f64) -> Result<ProbeValue> {
    let vn = v[0].hypot(v[1]);
    if !(vn > 0.0 && vn.is_finite()) {
        return Err(Error::Probe("probe direction must be nonzero".into()));
    }
    let grid = &field.grid;
    let spacing = grid.spacing();
    if !(h >= 3.0 * spacing * (1.0 - 1e-9)) {
        return Err(Error::Probe(format!("probe width {h:e} is under three grid cells ({spacing:e})")));
    }
    if 4.0 * h > 0.9 * grid.radius() {
        return Err(Error::Probe(format!("probe stencil 4h = {:e} reaches the boundary", 4.0 * h)));
    }
    let e = [v[0] / vn, v[1] / vn];
    let logu = |s: f64| -> Result<f64> {
        let u = field.at([s * e[0], s * e[1]])?;
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Probe(format!("u = {u:e} at distance {s:e} along the probe line")));
        }
        Ok(u.ln())
    };
    let l0 = logu(0.0)?;
    let d = |w: f64| -> Result<f64> { Ok((logu(w)? - 2.0 * l0 + logu(-w)?) / (w * w)) };
    let (d1, d2, d4) = (d(h)?, d(2.0 * h)?, d(4.0 * h)?);
    let r1 = d1 + (d1 - d2) / 3.0;
    let r2 = d2 + (d2 - d4) / 3.0;
    let floor = 16.0 * f64::EPSILON * (l0.abs() + 1.0) / (h * h);
    let s = vn * vn;
    Ok(ProbeValue { t: field.t, value: s * r1, error: s * ((r1 - r2).abs() + floor) })
}
