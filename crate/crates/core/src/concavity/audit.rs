use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::admissible::AdmissibleFunction;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::geometry::{geodesic, ModelSurface, NormalPoint, SampledCurve, ScalarField};

/// Quasi-concavity (`−∞`) or `∞`-concavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeMode {
    Quasi,
    Infinity,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Criterion<'a> {
    F(&'a AdmissibleFunction),
    Extreme(ExtremeMode),
}

impl Criterion<'_> {
    fn label(&self) -> String {
        match self {
            Criterion::F(f) => f.label(),
            Criterion::Extreme(ExtremeMode::Quasi) => "quasi".into(),
            Criterion::Extreme(ExtremeMode::Infinity) => "infinity".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The chord `(c₀, c₁)` and interior sample `c_τ` attaining the minimum slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub c0: [f64; 2],
    pub c1: [f64; 2],
    pub point: [f64; 2],
    pub tau: f64,
}

fn ser_ext<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

/// Outcome of a sampled concavity audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub criterion: String,
    /// Smallest slack over all tested triples; `+∞` if no triple was testable.
    #[serde(serialize_with = "ser_ext")]
    pub min_slack: f64,
    pub witness: Option<Witness>,
    pub verdict: Verdict,
    pub tolerance: f64,
    /// Number of tested triples.
    pub samples: usize,
    pub curves: usize,
    pub geodesic_failures: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl Witness {
    /// Slack of the witness triple for an admissible `F`.
    pub fn slack(&self, f: &dyn ScalarField, big_f: &AdmissibleFunction) -> Result<f64> {
        let v = [f.value(self.c0), f.value(self.point), f.value(self.c1)];
        let c = composed(&v, Criterion::F(big_f))?;
        Ok(triple_slack(&c, 0, 1, 2, self.tau, Criterion::F(big_f)).unwrap_or(f64::INFINITY))
    }

    /// Slack of the witness triple for an extreme mode.
    pub fn slack_extreme(&self, f: &dyn ScalarField, mode: ExtremeMode) -> Result<f64> {
        let v = [f.value(self.c0), f.value(self.point), f.value(self.c1)];
        let c = composed(&v, Criterion::Extreme(mode))?;
        Ok(triple_slack(&c, 0, 1, 2, self.tau, Criterion::Extreme(mode)).unwrap_or(f64::INFINITY))
    }
}

/// Tolerance model: fail iff `min_slack < −rel·(1 + scale)`, with `scale` the
/// largest finite `|F(f)|` (or `|f|` for the extreme modes) seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditOptions {
    pub rel_tol: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { rel_tol: 1e-9 }
    }
}

/// Deterministic endpoint sampler for a geodesic ball about `o`.
///
/// Endpoint pairs come from a 4-dimensional Halton sequence shifted by a
/// seeded Cranley–Patterson rotation; structured chords (diameters and
/// off-centre chords) are appended. Every curve is sampled at `taus`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sampler {
    pub seed: u64,
    pub pairs: usize,
    pub structured: usize,
    pub taus: Vec<f64>,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { seed: 0, pairs: 256, structured: 16, taus: (0..=8).map(|k| k as f64 / 8.0).collect() }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

impl Sampler {
    pub fn with_seed(seed: u64) -> Self {
        Sampler { seed, ..Default::default() }
    }

    /// Endpoint pairs inside the ball of radius `radius` (chart coordinates).
    pub fn endpoint_pairs(&self, radius: f64) -> Vec<([f64; 2], [f64; 2])> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let shift: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        let bases = [2u64, 3, 5, 7];
        let inner = radius * (1.0 - 1e-9);
        let disk = |u: f64, v: f64| {
            let r = inner * u.sqrt();
            let th = 2.0 * std::f64::consts::PI * v;
            [r * th.cos(), r * th.sin()]
        };
        let mut out = Vec::with_capacity(self.pairs + 2 * self.structured);
        for i in 0..self.pairs {
            let mut u = [0.0; 4];
            for d in 0..4 {
                u[d] = (radical_inverse(i as u64 + 1, bases[d]) + shift[d]).fract();
            }
            out.push((disk(u[0], u[1]), disk(u[2], u[3])));
        }
        let m = self.structured;
        for k in 0..m {
            let th = std::f64::consts::PI * k as f64 / m as f64;
            let r = 0.98 * radius;
            out.push(([r * th.cos(), r * th.sin()], [-r * th.cos(), -r * th.sin()]));
            let r2 = 0.9 * radius;
            let th2 = th + 2.0 * std::f64::consts::PI / 3.0;
            out.push(([r2 * th.cos(), r2 * th.sin()], [r2 * th2.cos(), r2 * th2.sin()]));
        }
        out
    }

    /// Sampled minimal geodesics for every endpoint pair; failures are counted.
    pub fn curves(&self, surface: &ModelSurface, radius: f64) -> Result<(Vec<SampledCurve>, usize)> {
        if !(radius > 0.0 && radius <= surface.convexity_radius()) {
            return Err(Error::Domain(format!(
                "audit ball radius {radius} outside the convexity guard {}",
                surface.convexity_radius()
            )));
        }
        let pairs = self.endpoint_pairs(radius);
        let built: Vec<Option<SampledCurve>> = pairs
            .par_iter()
            .map(|(p, q)| {
                geodesic(surface, NormalPoint { xi: *p }, NormalPoint { xi: *q })
                    .and_then(|g| g.sample(&self.taus))
                    .ok()
            })
            .collect();
        let failures = built.iter().filter(|c| c.is_none()).count();
        Ok((built.into_iter().flatten().collect(), failures))
    }
}

/// Composed values: `F(f)` for admissible `F`, `f` itself for extreme modes.
fn composed(values: &[f64], crit: Criterion) -> Result<Vec<ExtReal>> {
    values
        .iter()
        .map(|&v| {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Admissibility { value: v, sup: f64::INFINITY });
            }
            match crit {
                Criterion::F(big_f) => {
                    let sup = big_f.domain_sup();
                    if v >= sup {
                        return Err(Error::Admissibility { value: v, sup });
                    }
                    big_f.eval(v)
                }
                Criterion::Extreme(_) => Ok(ExtReal::Finite(v)),
            }
        })
        .collect()
}

/// Slack of the triple `(i, j, k)` at chord parameter `tau`; `None` when the
/// triple is exempt (extreme modes with a vanishing endpoint).
fn triple_slack(c: &[ExtReal], i: usize, j: usize, k: usize, tau: f64, crit: Criterion) -> Option<f64> {
    match crit {
        Criterion::F(_) => Some(c[j].slack_over(ExtReal::chord(c[i], c[k], tau))),
        Criterion::Extreme(mode) => {
            let (a, b, m) = (c[i].to_f64(), c[k].to_f64(), c[j].to_f64());
            if a <= 0.0 || b <= 0.0 {
                return None;
            }
            Some(match mode {
                ExtremeMode::Quasi => m - a.min(b),
                ExtremeMode::Infinity => m - a.max(b),
            })
        }
    }
}

/// All triple slacks of one curve, in a fixed loop order over `(i, k, j)`.
pub(crate) fn triple_slacks(values: &[f64], taus: &[f64], crit: Criterion) -> Result<Vec<f64>> {
    let c = composed(values, crit)?;
    let n = c.len();
    let mut out = Vec::new();
    for i in 0..n {
        for k in (i + 2)..n {
            for j in (i + 1)..k {
                let tau = (taus[j] - taus[i]) / (taus[k] - taus[i]);
                out.push(triple_slack(&c, i, j, k, tau, crit).unwrap_or(f64::INFINITY));
            }
        }
    }
    Ok(out)
}

struct CurveOutcome {
    min: f64,
    witness: Option<Witness>,
    count: usize,
    scale: f64,
}

fn audit_curve(f: &dyn ScalarField, curve: &SampledCurve, crit: Criterion) -> Result<CurveOutcome> {
    let values: Vec<f64> = curve.points.iter().map(|&p| f.value(p)).collect();
    let c = composed(&values, crit)?;
    let scale = c.iter().filter_map(|v| v.finite()).fold(0.0f64, |m, v| m.max(v.abs()));
    let n = c.len();
    let mut min = f64::INFINITY;
    let mut witness = None;
    let mut count = 0;
    for i in 0..n {
        for k in (i + 2)..n {
            for j in (i + 1)..k {
                let tau = (curve.taus[j] - curve.taus[i]) / (curve.taus[k] - curve.taus[i]);
                if let Some(s) = triple_slack(&c, i, j, k, tau, crit) {
                    count += 1;
                    if s < min {
                        min = s;
                        witness =
                            Some(Witness { c0: curve.points[i], c1: curve.points[k], point: curve.points[j], tau });
                    }
                }
            }
        }
    }
    Ok(CurveOutcome { min, witness, count, scale })
}

pub(crate) fn audit_curves_with(
    f: &dyn ScalarField,
    curves: &[SampledCurve],
    crit: Criterion,
    opts: &AuditOptions,
    geodesic_failures: usize,
) -> Result<AuditReport> {
    let outcomes: Vec<Result<CurveOutcome>> = curves.par_iter().map(|c| audit_curve(f, c, crit)).collect();
    let mut min = f64::INFINITY;
    let mut witness = None;
    let mut samples = 0;
    let mut scale: f64 = 0.0;
    // Sequential reduction in index order: ties keep the earliest curve.
    for o in outcomes {
        let o = o?;
        samples += o.count;
        scale = scale.max(o.scale);
        if o.min < min {
            min = o.min;
            witness = o.witness;
        }
    }
    let tolerance = opts.rel_tol * (1.0 + scale);
    let verdict = if min < -tolerance { Verdict::Fail } else { Verdict::Pass };
    Ok(AuditReport {
        criterion: crit.label(),
        min_slack: min,
        witness,
        verdict,
        tolerance,
        samples,
        curves: curves.len(),
        geodesic_failures,
    })
}

/// Audits `F(f(c_τ)) ≥ (1−τ)F(f(c₀)) + τF(f(c₁))` on every ordered triple of
/// samples along one curve (sub-arcs of minimal geodesics are minimal).
pub fn audit_along(
    f: &dyn ScalarField,
    big_f: &AdmissibleFunction,
    curve: &SampledCurve,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    audit_curves_with(f, std::slice::from_ref(curve), Criterion::F(big_f), opts, 0)
}

/// `F`-concavity audit over sampled minimal geodesics of a ball about `o`.
pub fn audit_domain(
    f: &dyn ScalarField,
    big_f: &AdmissibleFunction,
    surface: &ModelSurface,
    ball_radius: f64,
    sampler: &Sampler,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    let (curves, failures) = sampler.curves(surface, ball_radius)?;
    audit_curves_with(f, &curves, Criterion::F(big_f), opts, failures)
}

/// Quasi- or `∞`-concavity audit; chords with a vanishing endpoint are exempt.
pub fn audit_extremes(
    f: &dyn ScalarField,
    mode: ExtremeMode,
    surface: &ModelSurface,
    ball_radius: f64,
    sampler: &Sampler,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    let (curves, failures) = sampler.curves(surface, ball_radius)?;
    audit_curves_with(f, &curves, Criterion::Extreme(mode), opts, failures)
}

/// `F`-audit on caller-supplied curves, so several criteria can share one sample set.
pub fn audit_curves(
    f: &dyn ScalarField,
    big_f: &AdmissibleFunction,
    curves: &[SampledCurve],
    opts: &AuditOptions,
) -> Result<AuditReport> {
    audit_curves_with(f, curves, Criterion::F(big_f), opts, 0)
}

/// Extreme-mode audit on caller-supplied curves.
pub fn audit_curves_extreme(
    f: &dyn ScalarField,
    mode: ExtremeMode,
    curves: &[SampledCurve],
    opts: &AuditOptions,
) -> Result<AuditReport> {
    audit_curves_with(f, curves, Criterion::Extreme(mode), opts, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic() {
        let s = Sampler::with_seed(7);
        assert_eq!(s.endpoint_pairs(1.0), s.endpoint_pairs(1.0));
        assert_ne!(s.endpoint_pairs(1.0), Sampler::with_seed(8).endpoint_pairs(1.0));
    }

    #[test]
    fn triple_count() {
        let taus: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        let v = vec![1.0; 9];
        let s = triple_slacks(&v, &taus, Criterion::F(&AdmissibleFunction::log())).unwrap();
        assert_eq!(s.len(), 84);
        assert!(s.iter().all(|&x| x == 0.0));
    }
}
