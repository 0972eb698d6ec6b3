use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use curvheat::concavity::{
    hierarchy_suite, hot_approximation, hot_rescale_check, seeded_test_functions, AdmissibleFunction, AuditOptions,
    MonotoneTable, Sampler, TestShape,
};
use curvheat::counterexample::{
    breaking_experiment, c3_numeric, c3_scan, chord_scan, compute_c, gamma_hessians, infinity_counterexample_demo,
    rescaling_experiment, verify_conditions, working_radius, BreakingParams, BreakingVerdict, CounterexampleSpec, Psi,
    SpecOverrides,
};
use curvheat::geometry::{curvature_data, ModelSurface, SurfaceKind};
use curvheat::heatflow::{euclidean_semigroup, solve, EuclideanDatum, Grid, PolarGrid, SolveOptions};
use curvheat::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ConfigError, Experiment, FunctionConfig, RunConfig};

/// One row of `timeseries.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub hess_log_u_e1e1: f64,
    pub probe_error: f64,
    pub sup_u: f64,
    pub mass: f64,
}

/// A plot-ready table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: String,
    pub seconds: f64,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub report: Value,
    pub derived: BTreeMap<String, f64>,
    pub series: Vec<SeriesRow>,
    pub plots: Vec<PlotTable>,
    pub checks: Vec<Check>,
    pub breaches: Vec<String>,
    pub stages: Vec<Stage>,
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Stage { stage: String, error: Error, stages: Vec<Stage> },
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Stage { stage, error, .. } => write!(f, "stage `{stage}` failed: {error}"),
        }
    }
}

impl Outcome {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> curvheat::Result<T>) -> Result<T, RunError> {
        let t0 = Instant::now();
        let r = f();
        let status = if r.is_ok() { "ok" } else { "failed" };
        self.stages.push(Stage { name: name.into(), status: status.into(), seconds: t0.elapsed().as_secs_f64() });
        r.map_err(|error| RunError::Stage { stage: name.into(), error, stages: std::mem::take(&mut self.stages) })
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn run_experiment(cfg: &RunConfig, strict: bool) -> Result<Outcome, RunError> {
    let surface = cfg.surface().map_err(RunError::Config)?;
    let mut out = Outcome::default();
    match cfg.experiment {
        Experiment::BaselineFlat => baseline_flat(cfg, &surface, strict, &mut out)?,
        Experiment::Breaking => breaking(cfg, &surface, strict, &mut out)?,
        Experiment::FlatObstruction => flat_obstruction(cfg, &surface, &mut out)?,
        Experiment::Rescaling => rescaling(cfg, &surface, &mut out)?,
        Experiment::InfinityDemo => infinity_demo(cfg, &mut out)?,
        Experiment::AuditSuite => audit_suite(cfg, &surface, &mut out)?,
    }
    Ok(out)
}

fn baseline_flat(cfg: &RunConfig, surface: &ModelSurface, strict: bool, out: &mut Outcome) -> Result<(), RunError> {
    if surface.kind() != SurfaceKind::Flat {
        return Err(RunError::Config(ConfigError {
            path: "surface.kind".into(),
            message: "baseline_flat needs the flat surface".into(),
        }));
    }
    let radius = cfg.domain.radius.unwrap_or(8.0);
    let n_rho = cfg.grid.n_rho.unwrap_or(128);
    let n_theta = cfg.grid.n_theta.unwrap_or(128);
    let dt = cfg.time.dt.unwrap_or(2.5e-3);
    let probe_times = cfg.time.probe_times.clone().unwrap_or_else(|| vec![0.05, 0.1, 0.2]);
    let t_max = cfg.time.t_max.unwrap_or(*probe_times.last().unwrap_or(&0.2));
    let s = cfg.baseline.s;
    let width = cfg.baseline.probe_width;
    let snap = |t: f64| ((t / dt).round().max(1.0) * dt * 1e12).round() / 1e12;
    let mut times: Vec<f64> =
        (1..=40).map(|k| snap(k as f64 * t_max / 40.0)).chain(probe_times.iter().map(|&t| snap(t))).collect();
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| ((*a - *b) / dt).abs() < 0.5);
    out.derived.insert("baseline.dt".into(), dt);
    out.derived.insert("baseline.t_max".into(), t_max);
    let grid = out.stage("grid", || Ok(Arc::new(Grid::Polar(PolarGrid::new(*surface, radius, n_rho, n_theta)?))))?;
    let phi = move |xi: [f64; 2]| (-(xi[0] * xi[0] + xi[1] * xi[1]) / (4.0 * s)).exp();
    let mut opts = SolveOptions::new(dt);
    opts.strict = strict;
    let sol = out.stage("solve", || solve(grid.clone(), &phi, &times, &opts))?;
    let probes = out.stage("probe", || sol.probe_series([1.0, 0.0], width))?;
    let mut rows = Vec::new();
    for (f, p) in sol.fields.iter().zip(&probes) {
        out.series.push(SeriesRow {
            t: f.t,
            hess_log_u_e1e1: p.value,
            probe_error: p.error,
            sup_u: f.sup(),
            mass: f.mass(),
        });
        rows.push(vec![f.t, p.value, -0.5 / (s + f.t)]);
    }
    let mut at_probes = Vec::new();
    for &t in &probe_times {
        let p = probes.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs())).expect("recorded");
        let exact = -0.5 / (s + p.t);
        let rel = ((p.value - exact) / exact).abs();
        out.check(
            &format!("hessian_at_t={t}"),
            rel <= 0.02 && p.value < 0.0,
            format!("probe {:.6e}, exact {exact:.6e}, relative error {rel:.3e}", p.value),
        );
        at_probes
            .push(json!({"t": p.t, "probe": p.value, "probe_error": p.error, "exact": exact, "relative_error": rel}));
    }
    let negative = probes.iter().all(|p| p.value < 0.0);
    out.check("hessian_negative", negative, "Hess log u(e1,e1)(o) < 0 at every recorded time");
    out.breaches = sol.invariants.breaches.clone();
    out.plots.push(PlotTable {
        name: "hessian".into(),
        columns: vec!["t".into(), "probe".into(), "exact".into()],
        rows,
    });
    out.report = json!({
        "grid": {"R": radius, "n_rho": n_rho, "n_theta": n_theta, "unknowns": grid.len()},
        "datum": {"gaussian_s": s},
        "probe_width": width,
        "probe_times": at_probes,
        "invariants": to_value(&sol.invariants),
    });
    Ok(())
}

fn overrides(cfg: &RunConfig) -> SpecOverrides {
    SpecOverrides {
        c: cfg.construction.c_override,
        lambda: cfg.construction.lambda_override,
        delta: cfg.domain.delta_override,
    }
}

/// Breaking parameters after applying the `grid` and `time` overrides.
pub fn breaking_params(cfg: &RunConfig, lambda: f64, strict: bool) -> BreakingParams {
    let mut p = cfg.breaking;
    if let Some(c) = cfg.grid.cells {
        p.cells = c;
    }
    if let Some(dt) = cfg.time.dt {
        p.dt_scale = dt * lambda * lambda;
    }
    if let Some(t) = cfg.time.t_max {
        p.window = t * lambda * lambda;
    }
    p.strict = p.strict || strict;
    p
}

fn breaking(cfg: &RunConfig, surface: &ModelSurface, strict: bool, out: &mut Outcome) -> Result<(), RunError> {
    let spec = out.stage("construction", || CounterexampleSpec::build(surface, &overrides(cfg)))?;
    out.derived.insert("C".into(), spec.c);
    out.derived.insert("lambda".into(), spec.lambda);
    out.derived.insert("delta".into(), spec.delta);
    out.derived.insert("r".into(), spec.r);
    out.derived.insert("c3_closed_form".into(), spec.c3_closed_form);
    let cond = out.stage("verify_conditions", || verify_conditions(surface, &spec))?;
    out.derived.insert("c3_numeric".into(), cond.c3_numeric);
    out.check("conditions", cond.passed(), cond.failures.join("; "));
    let params = breaking_params(cfg, spec.lambda, strict);
    let rep = out.stage("breaking", || breaking_experiment(surface, &spec, &params))?;
    out.derived.insert("breaking.dt".into(), rep.dt);
    out.derived.insert("breaking.delta_run".into(), rep.delta_run);
    out.derived.insert("breaking.solve_radius".into(), rep.solve_radius);
    out.check("verdict_broken", rep.verdict == BreakingVerdict::Broken, format!("{:?}", rep.verdict));
    let bound = 0.1 * spec.delta * spec.delta;
    let first = rep.base.first_broken_t;
    out.check(
        "broken_early",
        first.is_some_and(|t| t <= bound),
        format!("first broken t = {first:?}, bound 0.1·δ² = {bound:e}"),
    );
    if let Some(stable) = rep.stable {
        out.check(
            "refinement_stable",
            stable,
            "doubled resolution keeps the verdict and moves values by less than their error",
        );
    }
    out.check(
        "initial_slope",
        rep.slope.passed,
        format!("fitted {:.6e} vs {:.6e}", rep.slope.fitted, rep.slope.expected),
    );
    out.breaches = rep.invariant_breaches.clone();
    let finest = rep.refined.as_ref().unwrap_or(&rep.base);
    out.series = finest
        .series
        .iter()
        .map(|p| SeriesRow { t: p.t, hess_log_u_e1e1: p.value, probe_error: p.error, sup_u: p.sup_u, mass: p.mass })
        .collect();
    for (name, pair) in
        std::iter::once(("breaking_base", &rep.base)).chain(rep.refined.iter().map(|r| ("breaking_refined", r)))
    {
        out.plots.push(PlotTable {
            name: name.into(),
            columns: vec!["t".into(), "value".into(), "error".into(), "probe_error".into()],
            rows: pair.series.iter().map(|p| vec![p.t, p.value, p.error, p.probe_error]).collect(),
        });
    }
    out.report = json!({
        "spec": {
            "C": spec.c, "lambda": spec.lambda, "delta": spec.delta, "r": spec.r,
            "branch": to_value(&spec.branch), "binding": to_value(&spec.c_bounds.binding),
            "i_plus": spec.i_plus, "kappa": spec.curv.kappa(),
            "c_bounds": to_value(&spec.c_bounds),
        },
        "conditions": to_value(&cond),
        "breaking": {
            "verdict": to_value(&rep.verdict),
            "first_broken_t": rep.base.first_broken_t,
            "max_ratio": rep.base.max_ratio,
            "refined_verdict": rep.refined.as_ref().map(|r| to_value(&r.verdict)),
            "stable": rep.stable,
            "slope": to_value(&rep.slope),
            "delta_run": rep.delta_run,
            "solve_radius": rep.solve_radius,
            "dt": rep.dt,
            "params": to_value(&params),
            "hint": rep.hint,
        },
    });
    Ok(())
}

fn flat_obstruction(cfg: &RunConfig, surface: &ModelSurface, out: &mut Outcome) -> Result<(), RunError> {
    let attempt = CounterexampleSpec::algebra(surface, &SpecOverrides { lambda: None, ..overrides(cfg) });
    let degenerate = matches!(attempt, Err(Error::DegenerateCurvature));
    out.check(
        "degenerate_curvature",
        degenerate,
        match &attempt {
            Err(e) => e.to_string(),
            Ok((_, _, _, l)) => format!("λ = {l} was found"),
        },
    );
    let curv = curvature_data(surface);
    let gamma = out.stage("christoffel_hessians", || gamma_hessians(surface, &curv))?;
    let c = match cfg.construction.c_override {
        Some(c) => c,
        None => out.stage("constant_c", || compute_c(&curv, Some(&gamma)))?.value,
    };
    out.derived.insert("C".into(), c);
    let lambdas: Vec<f64> = (1..=1000).map(f64::from).collect();
    let scan = c3_scan(&curv, c, &gamma, &lambdas);
    let worst = scan.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    out.check("c3_negative_on_scan", worst < 0.0, format!("max c3 over λ ∈ {{1,…,1000}} = {worst:e}"));
    let r = working_radius(surface);
    let mut numeric = Vec::new();
    for &l in &[1.0, 10.0, 100.0, 1000.0] {
        let psi = Psi::new(&curv, c, l);
        let c3n = out.stage(&format!("c3_numeric(λ={l})"), || c3_numeric(surface, &psi, r))?;
        let cf = scan[l as usize - 1].1;
        out.check(&format!("c3_numeric_negative(λ={l})"), c3n < 0.0, format!("numeric {c3n:e}, closed form {cf:e}"));
        numeric.push(json!({"lambda": l, "numeric": c3n, "closed_form": cf}));
    }
    out.plots.push(PlotTable {
        name: "c3_scan".into(),
        columns: vec!["lambda".into(), "c3".into()],
        rows: scan.iter().map(|&(l, v)| vec![l, v]).collect(),
    });
    out.report = json!({
        "outcome": if degenerate { "degenerate_curvature" } else { "unexpected" },
        "C": c,
        "kappa": curv.kappa(),
        "scan": {"lambda_min": 1.0, "lambda_max": 1000.0, "points": lambdas.len(), "max_c3": worst},
        "numeric": numeric,
    });
    Ok(())
}

fn rescaling(cfg: &RunConfig, surface: &ModelSurface, out: &mut Outcome) -> Result<(), RunError> {
    let params = cfg.rescaling.params(&cfg.grid);
    let ladder = cfg.rescaling.ladder.clone();
    let rep = out.stage("rescaling", || rescaling_experiment(surface, &ladder, &params))?;
    out.derived.insert("rescaling.floor".into(), rep.floor);
    out.check("monotone", rep.monotone, "sup-difference non-increasing along the ladder up to the flat floor");
    if let (Some(first), Some(last)) = (rep.rows.first(), rep.rows.last()) {
        if rep.rows.len() > 1 {
            out.check(
                "decreased",
                last.sup_difference < first.sup_difference,
                format!("{:e} -> {:e}", first.sup_difference, last.sup_difference),
            );
        }
    }
    out.plots.push(PlotTable {
        name: "rescaling".into(),
        columns: vec!["lambda".into(), "sup_difference".into(), "floor".into()],
        rows: rep.rows.iter().map(|r| vec![r.lambda, r.sup_difference, rep.floor]).collect(),
    });
    out.report = json!({"params": to_value(&params), "ladder": ladder, "result": to_value(&rep)});
    Ok(())
}

fn infinity_demo(cfg: &RunConfig, out: &mut Outcome) -> Result<(), RunError> {
    let a = cfg.demo.a_prime;
    let scan = cfg.demo.scan();
    let f = out.stage("admissible_function", || Ok(AdmissibleFunction::custom(MonotoneTable::identity(2.0 * a)?)))?;
    let cert = out.stage("chord_scan", || infinity_counterexample_demo(&f, a, &scan))?;
    out.check(
        "certificate",
        cert.slack < -1e-3,
        format!("slack {:.6e} at y = {}, z = {}, τ = {}", cert.slack, cert.y, cert.z, cert.tau),
    );
    let control = out.stage("negative_control", || chord_scan(&AdmissibleFunction::log(), a, &scan))?;
    out.check("log_control", control.slack >= -1e-9, format!("minimum Φ₀ slack {:e}", control.slack));
    let datum = EuclideanDatum::BallIndicator { radius: 1.0, height: a };
    let profile: Vec<Vec<f64>> = out.stage("profile", || {
        (0..=100)
            .map(|k| {
                let x = scan.z_max * k as f64 / 100.0;
                Ok(vec![x, euclidean_semigroup(&datum, &[x], scan.t)?])
            })
            .collect()
    })?;
    let (u0, ufar) = (profile[0][1], profile[100][1]);
    out.check("decays", u0 > ufar, format!("u(0) = {u0:e}, u({}) = {ufar:e}", scan.z_max));
    out.plots.push(PlotTable { name: "profile".into(), columns: vec!["x".into(), "u".into()], rows: profile });
    out.report = json!({
        "a_prime": a, "t": scan.t,
        "certificate": to_value(&cert),
        "negative_control": to_value(&control),
        "u_origin": u0, "u_far": ufar,
    });
    Ok(())
}

fn admissible(cfg: &FunctionConfig) -> curvheat::Result<AdmissibleFunction> {
    match *cfg {
        FunctionConfig::Power { alpha } => AdmissibleFunction::power(alpha),
        FunctionConfig::Log => Ok(AdmissibleFunction::log()),
        FunctionConfig::Hot { a } => AdmissibleFunction::hot(a),
        FunctionConfig::Identity { sup } => Ok(AdmissibleFunction::custom(MonotoneTable::identity(sup)?)),
    }
}

fn audit_suite(cfg: &RunConfig, surface: &ModelSurface, out: &mut Outcome) -> Result<(), RunError> {
    let seed = cfg.audit.seed.unwrap_or(cfg.seed);
    let sampler = Sampler { pairs: cfg.audit.pairs, ..Sampler::with_seed(seed) };
    let opts = AuditOptions { rel_tol: cfg.audit.tolerance };
    let radius = cfg.domain.radius.unwrap_or_else(|| working_radius(surface).min(1.0));
    let functions = seeded_test_functions(seed, cfg.audit.functions);
    let alphas = cfg.audit.alphas.clone();
    let hier = out.stage("hierarchy", || hierarchy_suite(&functions, &alphas, surface, radius, &sampler, &opts))?;
    out.check("hierarchy", hier.passed(), format!("{} violations", hier.violations));
    let big_f = out.stage("admissible_function", || admissible(&cfg.audit.function))?;
    let mut f_audits = Vec::new();
    for (i, f) in functions.iter().enumerate() {
        let r = out.stage(&format!("audit_F[{i}]"), || {
            curvheat::concavity::audit_domain(f, &big_f, surface, radius, &sampler, &opts)
        });
        f_audits.push(match r {
            Ok(r) => json!({"function": f.label(), "verdict": to_value(&r.verdict), "min_slack": r.min_slack}),
            Err(RunError::Stage { error, .. }) => json!({"function": f.label(), "error": error.to_string()}),
            Err(e) => return Err(e),
        });
    }
    let gauss = functions.iter().find(|f| matches!(f.shape, TestShape::Gaussian { .. })).copied();
    let mut ladder = Vec::new();
    if let Some(g) = gauss {
        let mut errors = Vec::new();
        for &a in &cfg.audit.hot_ladder {
            let approx = out.stage(&format!("hot_approximation(a={a})"), || {
                hot_approximation(&g, surface, radius, a, 1e-6, &sampler, &opts)
            })?;
            errors.push(approx.report.sup_error);
            out.derived.insert(format!("hot.sup_error(a={a})"), approx.report.sup_error);
            let mut rescale = Value::Null;
            if let Some(&a0) = cfg.audit.hot_ladder.first() {
                if a0 < a {
                    let rc = out.stage(&format!("hot_rescale_check(b={a},a={a0})"), || {
                        hot_rescale_check(&approx, a, a0, surface, radius, &sampler, &opts)
                    })?;
                    out.check(
                        &format!("hot_rescale(b={a},a={a0})"),
                        rc.passed,
                        format!("max slack difference {:e}", rc.max_slack_difference),
                    );
                    rescale = json!({"a": a0, "passed": rc.passed, "max_slack_difference": rc.max_slack_difference});
                }
            }
            ladder.push(json!({"a": a, "report": to_value(&approx.report), "rescale": rescale}));
        }
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        out.check("hot_sup_error_decreasing", decreasing, format!("{errors:?}"));
    }
    out.plots.push(PlotTable {
        name: "hierarchy".into(),
        columns: std::iter::once("function".to_string())
            .chain(alphas.iter().map(|a| format!("alpha={a}")))
            .chain(["quasi".to_string()])
            .collect(),
        rows: hier
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                std::iter::once(i as f64)
                    .chain(r.alpha_pass.iter().map(|&p| f64::from(u8::from(p))))
                    .chain([f64::from(u8::from(r.quasi_pass))])
                    .collect()
            })
            .collect(),
    });
    out.report = json!({
        "seed": seed,
        "radius": radius,
        "hierarchy": to_value(&hier),
        "F": big_f.label(),
        "F_audits": f_audits,
        "hot_ladder": ladder,
    });
    Ok(())
}

/// Dry-run plan: derived constants and problem sizes, no PDE solve.
pub fn describe(cfg: &RunConfig) -> Result<Value, RunError> {
    let surface = cfg.surface().map_err(RunError::Config)?;
    let mut out = Outcome::default();
    let plan = match cfg.experiment {
        Experiment::Breaking | Experiment::FlatObstruction => {
            let curv = curvature_data(&surface);
            let branch = if curv.i_plus().is_empty() { "empty_i_plus" } else { "positive_curvature" };
            match CounterexampleSpec::algebra(&surface, &overrides(cfg)) {
                Err(Error::DegenerateCurvature) => json!({
                    "surface": to_value(&surface),
                    "note": "degenerate curvature: the c3 quadratic has zero leading coefficient, so no λ makes c3 positive",
                }),
                Err(e) => return Err(RunError::Stage { stage: "construction".into(), error: e, stages: vec![] }),
                Ok(_) if cfg.experiment == Experiment::FlatObstruction => json!({
                    "surface": to_value(&surface),
                    "note": "curvature is not identically zero; the obstruction scan will report a positive c3",
                }),
                Ok(_) => {
                    let spec = out.stage("construction", || CounterexampleSpec::build(&surface, &overrides(cfg)))?;
                    let p = breaking_params(cfg, spec.lambda, false);
                    let n = p.cells as f64;
                    let cells = std::f64::consts::PI * n * n * if p.refine { 21.0 } else { 5.0 };
                    let steps = p.window / p.dt_scale * if p.refine { 4.0 } else { 2.0 };
                    json!({
                        "surface": to_value(&surface),
                        "branch": branch,
                        "C": spec.c, "binding": to_value(&spec.c_bounds.binding),
                        "lambda": spec.lambda, "delta": spec.delta,
                        "c3_closed_form": spec.c3_closed_form,
                        "estimated_unknowns": cells.round(),
                        "estimated_steps": steps.round(),
                    })
                }
            }
        }
        Experiment::BaselineFlat => {
            let n_rho = cfg.grid.n_rho.unwrap_or(128);
            let n_theta = cfg.grid.n_theta.unwrap_or(128);
            let dt = cfg.time.dt.unwrap_or(2.5e-3);
            let t_max = cfg.time.t_max.unwrap_or(0.2);
            json!({"estimated_unknowns": 1 + (n_rho - 1) * n_theta, "estimated_steps": (t_max / dt).round()})
        }
        Experiment::Rescaling => {
            let p = cfg.rescaling.params(&cfg.grid);
            json!({"ladder": cfg.rescaling.ladder, "estimated_unknowns": 1 + (p.n_rho - 1) * p.n_theta, "runs": cfg.rescaling.ladder.len() + 1})
        }
        Experiment::InfinityDemo => json!({"chords": cfg.demo.z_points * cfg.demo.taus.len()}),
        Experiment::AuditSuite => {
            json!({"functions": cfg.audit.functions, "alphas": cfg.audit.alphas, "pairs": cfg.audit.pairs})
        }
    };
    Ok(json!({"experiment": cfg.experiment.name(), "plan": plan}))
}
