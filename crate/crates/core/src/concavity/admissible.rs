use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::quad::integrate;

/// `(4π)^{−1/2}`.
const KERNEL_NORM: f64 = 0.282_094_791_773_878_14;

/// `T(z) = (4π)^{−1/2} ∫_z^∞ e^{−u²/4} du` for `z ≥ 0`, by adaptive quadrature.
fn upper_tail(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    // Beyond `end` the integrand is below e^{−46} times its value at z.
    let end = (z * z + 184.0).sqrt();
    let q = integrate(|u| (-0.25 * u * u).exp(), z, end, 0.0, 1e-14);
    KERNEL_NORM * q.value
}

/// `Ψ(s) = (e^{Δ} 𝟙_{[0,∞)})(s) = (4π)^{−1/2} ∫₀^∞ e^{−(s−s')²/4} ds'`.
///
/// Evaluated by quadrature of the defining integral, splitting at the kernel
/// peak so that both tails keep full relative accuracy.
pub fn heated_step(s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s == f64::INFINITY {
        return 1.0;
    }
    if s == f64::NEG_INFINITY || s < -60.0 {
        return 0.0;
    }
    if s == 0.0 {
        return 0.5;
    }
    if s < 0.0 {
        upper_tail(-s)
    } else {
        1.0 - upper_tail(s)
    }
}

/// `Ψ'(s) = (4π)^{−1/2} e^{−s²/4}`.
pub fn heated_step_derivative(s: f64) -> f64 {
    KERNEL_NORM * (-0.25 * s * s).exp()
}

/// `H = Ψ^{−1}: (0,1) → ℝ` by safeguarded Newton iteration on a bracket.
pub fn heated_step_inverse(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("H is defined on (0,1), got {y}")));
    }
    if y == 0.5 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (-1.0, 1.0);
    while heated_step(lo) > y {
        lo *= 2.0;
        if lo < -80.0 {
            return Err(Error::Range(format!("H({y}) below representable range")));
        }
    }
    while heated_step(hi) < y {
        hi *= 2.0;
        if hi > 80.0 {
            return Err(Error::Range(format!("H({y}) above representable range")));
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = heated_step(s) - y;
        if f == 0.0 {
            return Ok(s);
        }
        if f > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let d = heated_step_derivative(s);
        let mut next = s - f / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 4.0 * f64::EPSILON * (1.0 + s.abs()) || hi - lo <= 4.0 * f64::EPSILON * (1.0 + s.abs()) {
            return Ok(next);
        }
        s = next;
    }
    Ok(s)
}

/// A strictly increasing table `r ↦ F(r)` with linear interpolation.
///
/// The table covers `[r₀, r_last)`; if `r₀ > 0` the interval `(0, r₀)` is
/// outside the domain. `F(0) = −∞` regardless of the first knot, so a first
/// knot at `r = 0` records the right limit `F(0⁺)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneTable {
    r: Vec<f64>,
    f: Vec<f64>,
}

impl MonotoneTable {
    pub fn new(r: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || r.len() != f.len() {
            return Err(Error::Domain("table needs at least two knots of equal length".into()));
        }
        if r[0] < 0.0 || r.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("table knots must be finite with r ≥ 0".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) || f.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("table must be strictly increasing in r and F".into()));
        }
        Ok(MonotoneTable { r, f })
    }

    /// The identity `F(r) = r` on `[0, sup)`, with the bottom element at 0.
    pub fn identity(sup: f64) -> Result<Self> {
        Self::new(vec![0.0, sup], vec![0.0, sup])
    }

    fn eval(&self, r: f64) -> Option<f64> {
        if r < self.r[0] || r >= *self.r.last().unwrap() {
            return None;
        }
        let i = self.r.partition_point(|&x| x <= r) - 1;
        let w = (r - self.r[i]) / (self.r[i + 1] - self.r[i]);
        Some(self.f[i] + w * (self.f[i + 1] - self.f[i]))
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        if s < self.f[0] || s >= *self.f.last().unwrap() {
            return None;
        }
        let i = self.f.partition_point(|&x| x <= s) - 1;
        let w = (s - self.f[i]) / (self.f[i + 1] - self.f[i]);
        Some(self.r[i] + w * (self.r[i + 1] - self.r[i]))
    }

    pub fn sup(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// `lim_{r→0⁺} F(r)` when the table starts at 0.
    pub fn right_limit_at_zero(&self) -> Option<f64> {
        (self.r[0] == 0.0).then_some(self.f[0])
    }
}

/// Family of an admissible function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdmissibleKind {
    /// `Φ_α(r) = (r^α − 1)/α`, `Φ₀ = log`, on `[0, ∞)`.
    Power {
        alpha: f64,
    },
    /// `H_a(r) = H(r/a)` on `[0, a)`; `a = ∞` gives `log`.
    Hot {
        a: f64,
    },
    Custom {
        table: MonotoneTable,
    },
}

/// A strictly increasing `F: [0, a) → [−∞, ∞)` with `F(0) = −∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleFunction {
    pub kind: AdmissibleKind,
}

impl AdmissibleFunction {
    pub fn power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("Φ_α needs finite α (use the extreme audits for ±∞), got {alpha}")));
        }
        Ok(AdmissibleFunction { kind: AdmissibleKind::Power { alpha } })
    }

    pub fn log() -> Self {
        AdmissibleFunction { kind: AdmissibleKind::Power { alpha: 0.0 } }
    }

    pub fn hot(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("H_a needs a > 0, got {a}")));
        }
        Ok(AdmissibleFunction { kind: AdmissibleKind::Hot { a } })
    }

    pub fn custom(table: MonotoneTable) -> Self {
        AdmissibleFunction { kind: AdmissibleKind::Custom { table } }
    }

    /// Upper end `a` of the domain `[0, a)`.
    pub fn domain_sup(&self) -> f64 {
        match &self.kind {
            AdmissibleKind::Power { .. } => f64::INFINITY,
            AdmissibleKind::Hot { a } => *a,
            AdmissibleKind::Custom { table } => table.sup(),
        }
    }

    /// `F(r)` for `r ∈ [0, a)`.
    pub fn eval(&self, r: f64) -> Result<ExtReal> {
        let sup = self.domain_sup();
        if !(r >= 0.0 && r < sup) {
            return Err(Error::Domain(format!("F evaluated at {r} outside [0, {sup})")));
        }
        if r == 0.0 {
            return Ok(ExtReal::NegInf);
        }
        let v = match &self.kind {
            AdmissibleKind::Power { alpha } => {
                if *alpha == 0.0 {
                    r.ln()
                } else {
                    (alpha * r.ln()).exp_m1() / alpha
                }
            }
            AdmissibleKind::Hot { a } => {
                if a.is_infinite() {
                    r.ln()
                } else {
                    heated_step_inverse(r / a)?
                }
            }
            AdmissibleKind::Custom { table } => {
                table.eval(r).ok_or_else(|| Error::Domain(format!("{r} below the first table knot")))?
            }
        };
        Ok(ExtReal::Finite(v))
    }

    /// `F^{−1}(s)`; the bottom element maps to 0.
    pub fn inverse(&self, s: ExtReal) -> Result<f64> {
        let s = match s {
            ExtReal::NegInf => return Ok(0.0),
            ExtReal::Finite(s) => s,
        };
        let range = |msg: String| Error::Range(msg);
        match &self.kind {
            AdmissibleKind::Power { alpha } => {
                if *alpha == 0.0 {
                    let r = s.exp();
                    if r.is_infinite() {
                        return Err(range(format!("exp({s}) overflows")));
                    }
                    Ok(r)
                } else {
                    let base = alpha * s;
                    if base <= -1.0 {
                        return Err(range(format!("Φ_{alpha} does not attain {s}")));
                    }
                    let r = (base.ln_1p() / alpha).exp();
                    if r.is_infinite() {
                        return Err(range(format!("Φ_{alpha}^(-1)({s}) overflows")));
                    }
                    Ok(r)
                }
            }
            AdmissibleKind::Hot { a } => {
                if a.is_infinite() {
                    return Ok(s.exp());
                }
                let y = heated_step(s);
                if !(y > 0.0 && y < 1.0) {
                    return Err(range(format!("H_{a}^(-1)({s}) not representable")));
                }
                Ok(a * y)
            }
            AdmissibleKind::Custom { table } => {
                table.inverse(s).ok_or_else(|| range(format!("{s} outside the table range")))
            }
        }
    }

    /// `lim_{r→0⁺} F(r)`: `−∞` unless a power with `α > 0` or a table
    /// starting at 0.
    pub fn limit_at_zero(&self) -> ExtReal {
        match &self.kind {
            AdmissibleKind::Power { alpha } if *alpha > 0.0 => ExtReal::Finite(-1.0 / alpha),
            AdmissibleKind::Custom { table } => table.right_limit_at_zero().map_or(ExtReal::NegInf, ExtReal::Finite),
            _ => ExtReal::NegInf,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            AdmissibleKind::Power { alpha } => format!("power(alpha={alpha})"),
            AdmissibleKind::Hot { a } => format!("hot(a={a})"),
            AdmissibleKind::Custom { .. } => "custom".to_string(),
        }
    }
}

/// Free-function form of [`AdmissibleFunction::eval`].
pub fn eval_f(f: &AdmissibleFunction, r: f64) -> Result<ExtReal> {
    f.eval(r)
}

/// Free-function form of [`AdmissibleFunction::inverse`].
pub fn eval_f_inverse(f: &AdmissibleFunction, s: ExtReal) -> Result<f64> {
    f.inverse(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_examples() {
        let v = |a: f64, r: f64| AdmissibleFunction::power(a).unwrap().eval(r).unwrap().to_f64();
        assert!((v(2.0, 3.0) - 4.0).abs() < 1e-14);
        assert!((v(-1.0, 2.0) - 0.5).abs() < 1e-15);
        assert_eq!(v(0.0, 1.0), 0.0);
        assert_eq!(AdmissibleFunction::power(1.0).unwrap().eval(0.0).unwrap(), ExtReal::NegInf);
    }

    #[test]
    fn power_range_errors() {
        let f = AdmissibleFunction::power(-1.0).unwrap();
        assert!(matches!(f.inverse(ExtReal::Finite(1.0)), Err(Error::Range(_))));
        let g = AdmissibleFunction::power(2.0).unwrap();
        assert!(matches!(g.inverse(ExtReal::Finite(-0.6)), Err(Error::Range(_))));
    }

    #[test]
    fn hot_domain() {
        let h = AdmissibleFunction::hot(2.0).unwrap();
        assert!(matches!(h.eval(2.0), Err(Error::Domain(_))));
        assert!(matches!(h.eval(-0.1), Err(Error::Domain(_))));
        assert_eq!(h.eval(1.0).unwrap(), ExtReal::Finite(0.0));
    }

    #[test]
    fn heated_step_symmetry() {
        for &s in &[0.1, 0.7, 2.5, 6.0] {
            assert!((heated_step(s) + heated_step(-s) - 1.0).abs() < 1e-14);
        }
        assert_eq!(heated_step(0.0), 0.5);
    }

    #[test]
    fn table_interpolates() {
        let t = MonotoneTable::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 3.0]).unwrap();
        let f = AdmissibleFunction::custom(t);
        assert_eq!(f.eval(2.0).unwrap(), ExtReal::Finite(2.5));
        assert_eq!(f.eval(0.0).unwrap(), ExtReal::NegInf);
        assert_eq!(f.limit_at_zero(), ExtReal::Finite(0.0));
        assert!((f.inverse(ExtReal::Finite(2.5)).unwrap() - 2.0).abs() < 1e-15);
    }
}
