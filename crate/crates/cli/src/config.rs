use std::path::PathBuf;

use curvheat::counterexample::{BreakingParams, ChordScan, RescalingParams};
use curvheat::geometry::{ModelSurface, SurfaceKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    BaselineFlat,
    Breaking,
    FlatObstruction,
    Rescaling,
    InfinityDemo,
    AuditSuite,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::BaselineFlat => "baseline_flat",
            Experiment::Breaking => "breaking",
            Experiment::FlatObstruction => "flat_obstruction",
            Experiment::Rescaling => "rescaling",
            Experiment::InfinityDemo => "infinity_demo",
            Experiment::AuditSuite => "audit_suite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: SurfaceKind,
    /// Gaussian curvature `K`; its sign must match `kind`.
    #[serde(rename = "K", alias = "curvature")]
    pub k: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub delta_override: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_rho: Option<usize>,
    pub n_theta: Option<usize>,
    /// Cartesian cells per radius (breaking runs).
    pub cells: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub probe_times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionConfig {
    #[serde(rename = "C_override")]
    pub c_override: Option<f64>,
    pub lambda_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionConfig {
    Power {
        alpha: f64,
    },
    Log,
    Hot {
        a: f64,
    },
    /// `F(r) = r` on `(0, sup)`, `F(0) = −∞`.
    Identity {
        sup: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    #[serde(rename = "F")]
    pub function: FunctionConfig,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub pairs: usize,
    pub functions: usize,
    pub alphas: Vec<f64>,
    pub hot_ladder: Vec<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            function: FunctionConfig::Hot { a: 10.0 },
            seed: None,
            tolerance: 1e-9,
            pairs: 256,
            functions: 20,
            alphas: vec![-2.0, -1.0, 0.0, 0.5, 1.0],
            hot_ladder: vec![10.0, 100.0, 1000.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineConfig {
    /// Gaussian datum `exp(−|ξ|²/(4s))`.
    pub s: f64,
    pub probe_width: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig { s: 0.25, probe_width: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RescalingConfig {
    pub ladder: Vec<f64>,
    pub bump_radius: f64,
    pub solve_radius: f64,
    pub compact: f64,
    pub times: Vec<f64>,
}

impl Default for RescalingConfig {
    fn default() -> Self {
        let p = RescalingParams::default();
        RescalingConfig {
            ladder: vec![2.0, 4.0, 8.0],
            bump_radius: p.bump_radius,
            solve_radius: p.solve_radius,
            compact: p.compact,
            times: p.times,
        }
    }
}

impl RescalingConfig {
    pub fn params(&self, grid: &GridConfig) -> RescalingParams {
        let d = RescalingParams::default();
        RescalingParams {
            bump_radius: self.bump_radius,
            solve_radius: self.solve_radius,
            compact: self.compact,
            n_rho: grid.n_rho.unwrap_or(d.n_rho),
            n_theta: grid.n_theta.unwrap_or(d.n_theta),
            times: self.times.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DemoConfig {
    pub a_prime: f64,
    pub y: f64,
    pub z_max: f64,
    pub z_points: usize,
    pub taus: Vec<f64>,
    pub t: f64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        let c = ChordScan::default();
        DemoConfig { a_prime: 1.0, y: c.y, z_max: c.z_max, z_points: c.z_points, taus: c.taus, t: c.t }
    }
}

impl DemoConfig {
    pub fn scan(&self) -> ChordScan {
        ChordScan { y: self.y, z_max: self.z_max, z_points: self.z_points, taus: self.taus.clone(), t: self.t }
    }
}

/// A run specification. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub surface: Option<SurfaceConfig>,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub construction: ConstructionConfig,
    #[serde(default)]
    pub audit: AuditConfig,
    #[serde(default)]
    pub baseline: BaselineConfig,
    #[serde(default)]
    pub breaking: BreakingParams,
    #[serde(default)]
    pub rescaling: RescalingConfig,
    #[serde(default)]
    pub demo: DemoConfig,
}

/// A configuration error with the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: message.into() }
}

fn positive(path: &str, v: Option<f64>) -> Result<(), ConfigError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(bad(path, format!("must be positive and finite (got {x})"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| bad("", e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn surface(&self) -> Result<ModelSurface, ConfigError> {
        let s = match &self.surface {
            Some(s) => s.clone(),
            None => match self.experiment {
                Experiment::BaselineFlat
                | Experiment::FlatObstruction
                | Experiment::AuditSuite
                | Experiment::InfinityDemo => SurfaceConfig { kind: SurfaceKind::Flat, k: 0.0 },
                _ => SurfaceConfig { kind: SurfaceKind::Sphere, k: 1.0 },
            },
        };
        ModelSurface::of_kind(s.kind, s.k).map_err(|e| bad("surface.K", e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.surface()?;
        positive("domain.R", self.domain.radius)?;
        positive("domain.delta_override", self.domain.delta_override)?;
        positive("time.dt", self.time.dt)?;
        positive("time.t_max", self.time.t_max)?;
        if let Some(ts) = &self.time.probe_times {
            for (i, t) in ts.iter().enumerate() {
                positive(&format!("time.probe_times[{i}]"), Some(*t))?;
            }
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("time.probe_times", "must be strictly increasing"));
            }
        }
        positive("construction.C_override", self.construction.c_override)?;
        if let Some(l) = self.construction.lambda_override {
            if !(l > 1.0 && l.is_finite()) {
                return Err(bad("construction.lambda_override", format!("must exceed 1 (got {l})")));
            }
        }
        for (path, n, min) in [
            ("grid.n_rho", self.grid.n_rho, 32),
            ("grid.n_theta", self.grid.n_theta, 64),
            ("grid.cells", self.grid.cells, 16),
        ] {
            if let Some(n) = n {
                if n < min {
                    return Err(bad(path, format!("must be at least {min} (got {n})")));
                }
            }
        }
        if let Some(n) = self.grid.n_theta {
            if n % 2 != 0 {
                return Err(bad("grid.n_theta", format!("must be even (got {n})")));
            }
        }
        positive("audit.tolerance", Some(self.audit.tolerance))?;
        if self.audit.pairs == 0 {
            return Err(bad("audit.pairs", "must be positive"));
        }
        match self.audit.function {
            FunctionConfig::Power { alpha } if !alpha.is_finite() => {
                return Err(bad("audit.F.alpha", "must be finite"))
            }
            FunctionConfig::Hot { a } => positive("audit.F.a", Some(a))?,
            FunctionConfig::Identity { sup } => positive("audit.F.sup", Some(sup))?,
            _ => {}
        }
        positive("baseline.s", Some(self.baseline.s))?;
        positive("baseline.probe_width", Some(self.baseline.probe_width))?;
        positive("breaking.dt_scale", Some(self.breaking.dt_scale))?;
        positive("breaking.window", Some(self.breaking.window))?;
        positive("breaking.probe_width", Some(self.breaking.probe_width))?;
        for (i, l) in self.rescaling.ladder.iter().enumerate() {
            positive(&format!("rescaling.ladder[{i}]"), Some(*l))?;
        }
        positive("demo.a_prime", Some(self.demo.a_prime))?;
        positive("demo.t", Some(self.demo.t))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::parse("experiment = \"breaking\"").unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.breaking, BreakingParams::default());
        assert_eq!(c.surface().unwrap().kind(), SurfaceKind::Sphere);
        let f = RunConfig::parse("experiment = \"audit_suite\"").unwrap();
        assert_eq!(f.surface().unwrap().kind(), SurfaceKind::Flat);
    }

    #[test]
    fn errors_carry_field_paths() {
        let cases = [
            ("[time]\ndt = 0.0", "time.dt"),
            ("[grid]\nn_theta = 65", "grid.n_theta"),
            ("[grid]\nn_rho = 8", "grid.n_rho"),
            ("[construction]\nlambda_override = 0.5", "construction.lambda_override"),
            ("[time]\nprobe_times = [0.1, 0.05]", "time.probe_times"),
            ("[audit.F]\nkind = \"hot\"\na = -1.0", "audit.F.a"),
            ("[rescaling]\nladder = [2.0, -4.0]", "rescaling.ladder[1]"),
        ];
        for (body, path) in cases {
            let e = RunConfig::parse(&format!("experiment = \"breaking\"\n{body}")).unwrap_err();
            assert_eq!(e.path, path, "{body}");
        }
    }

    #[test]
    fn nested_overrides_parse() {
        let c = RunConfig::parse(
            "experiment = \"breaking\"\n[breaking]\ncells = 32\nrefine = false\n[surface]\nkind = \"hyperbolic\"\ncurvature = -2.0\n",
        )
        .unwrap();
        assert_eq!(c.breaking.cells, 32);
        assert!(!c.breaking.refine);
        assert_eq!(c.surface().unwrap().curvature(), -2.0);
    }

    #[test]
    fn unknown_nested_key_is_rejected() {
        assert!(RunConfig::parse("experiment = \"breaking\"\n[breaking]\ncell = 32\n").is_err());
        assert!(RunConfig::parse("experiment = \"rescaling\"\n[rescaling]\nn_rho = 32\n").is_err());
    }
}
