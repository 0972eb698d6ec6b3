use std::sync::Arc;

use crate::concavity::heated_step;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// A bounded density on `ℝⁿ`.
pub type Density = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Data for the Euclidean heat semigroup on `ℝⁿ`.
#[derive(Clone)]
pub enum EuclideanDatum {
    Constant(f64),
    /// `amp · exp(−|x|²/(4s))`.
    Gaussian {
        amp: f64,
        s: f64,
    },
    /// Indicator of `{x₁ > 0}`.
    HalfLine,
    /// `height · 𝟙_{|x| ≤ radius}`.
    BallIndicator {
        radius: f64,
        height: f64,
    },
    /// A bounded function supported in `|x| ≤ radius`.
    Compact {
        radius: f64,
        f: Density,
    },
}

impl std::fmt::Debug for EuclideanDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EuclideanDatum::Constant(c) => write!(f, "Constant({c})"),
            EuclideanDatum::Gaussian { amp, s } => write!(f, "Gaussian {{ amp: {amp}, s: {s} }}"),
            EuclideanDatum::HalfLine => write!(f, "HalfLine"),
            EuclideanDatum::BallIndicator { radius, height } => {
                write!(f, "BallIndicator {{ radius: {radius}, height: {height} }}")
            }
            EuclideanDatum::Compact { radius, .. } => write!(f, "Compact {{ radius: {radius}, .. }}"),
        }
    }
}

fn heat_kernel_1d(d: f64, t: f64) -> f64 {
    (-d * d / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt()
}

/// Nested 1-D integration of `∏ k(x_i − y_i) f(y)` over the box
/// `[x_i − L, x_i + L] ∩ [−r, r]`.
fn convolve(f: &(dyn Fn(&[f64]) -> f64 + Send + Sync), x: &[f64], t: f64, r: f64) -> f64 {
    let n = x.len();
    let l = (160.0 * t).sqrt();
    fn level(
        f: &(dyn Fn(&[f64]) -> f64 + Send + Sync),
        x: &[f64],
        t: f64,
        r: f64,
        l: f64,
        y: &mut Vec<f64>,
        n: usize,
    ) -> f64 {
        let d = y.len();
        if d == n {
            return f(y);
        }
        let lo = (x[d] - l).max(-r);
        let hi = (x[d] + l).min(r);
        if lo >= hi {
            return 0.0;
        }
        let mut yy = y.clone();
        let q = integrate(
            |s| {
                yy.truncate(d);
                yy.push(s);
                heat_kernel_1d(x[d] - s, t) * level(f, x, t, r, l, &mut yy.clone(), n)
            },
            lo,
            hi,
            1e-13,
            1e-10,
        );
        y.truncate(d);
        q.value
    }
    level(f, x, t, r, l, &mut Vec::with_capacity(n), n)
}

/// `(e^{tΔ} φ)(x)` on `ℝⁿ` with kernel `(4πt)^{−n/2} e^{−|x−y|²/(4t)}`.
pub fn euclidean_semigroup(phi: &EuclideanDatum, x: &[f64], t: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Domain("semigroup point must have at least one coordinate".into()));
    }
    if !(t > 0.0 && t.is_finite()) || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("semigroup needs t > 0 and a finite point (t = {t})")));
    }
    let n = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let out = match phi {
        EuclideanDatum::Constant(c) => *c,
        EuclideanDatum::Gaussian { amp, s } => {
            if !(*s > 0.0) {
                return Err(Error::Domain(format!("Gaussian width must be positive, got {s}")));
            }
            amp * (s / (s + t)).powf(0.5 * n) * (-r2 / (4.0 * (s + t))).exp()
        }
        EuclideanDatum::HalfLine => heated_step(x[0] / t.sqrt()),
        EuclideanDatum::BallIndicator { radius, height } => {
            if x.len() == 1 {
                // written through lower tails so the far field keeps relative accuracy
                let s = t.sqrt();
                let d = x[0].abs();
                height * (heated_step((radius - d) / s) - heated_step((-radius - d) / s))
            } else if x.len() == 2 {
                // inner coordinate in closed form, outer by quadrature
                let (rad, s) = (*radius, t.sqrt());
                let l = (160.0 * t).sqrt();
                let (lo, hi) = ((x[0] - l).max(-rad), (x[0] + l).min(rad));
                if lo >= hi {
                    0.0
                } else {
                    let q = integrate(
                        |y| {
                            let a = (rad * rad - y * y).max(0.0).sqrt();
                            heat_kernel_1d(x[0] - y, t) * (heated_step((a - x[1]) / s) - heated_step((-a - x[1]) / s))
                        },
                        lo,
                        hi,
                        1e-15,
                        1e-12,
                    );
                    height * q.value
                }
            } else {
                let (rad, hgt) = (*radius, *height);
                let f = move |y: &[f64]| if y.iter().map(|v| v * v).sum::<f64>() <= rad * rad { hgt } else { 0.0 };
                convolve(&f, x, t, rad)
            }
        }
        EuclideanDatum::Compact { radius, f } => convolve(f.as_ref(), x, t, *radius),
    };
    if !out.is_finite() {
        return Err(Error::Domain(format!("semigroup value is not finite at t = {t}")));
    }
    Ok(out)
}
