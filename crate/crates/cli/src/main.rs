mod config;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::RunConfig;
use experiments::{describe, run_experiment, RunError};

#[derive(Parser)]
#[command(name = "curvheat", version, about = "Heat-flow concavity experiments on model surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat any solver invariant breach as fatal.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print derived constants and problem sizes without solving.
    Describe {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the cartesian product of `--set path=v1,v2,...` variants in parallel.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "set", value_name = "PATH=V1,V2,...")]
        sets: Vec<String>,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

fn load(path: &Path) -> Result<toml::Table, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e.to_string().trim_end())))
}

fn resolve(table: &toml::Table, seed: Option<u64>) -> Result<RunConfig, Failure> {
    let text = toml::to_string(table).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut cfg = RunConfig::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn output_dir(cfg: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("runs").join(cfg.experiment.name()))
}

/// Runs one configuration; `Ok(false)` means a check failed.
fn execute(cfg: &RunConfig, dir: &Path, strict: bool, quiet: bool) -> Result<bool, Failure> {
    let t0 = Instant::now();
    match run_experiment(cfg, strict) {
        Ok(out) => {
            output::write_artifacts(dir, cfg, &out, t0.elapsed().as_secs_f64())
                .map_err(|e| Failure::Run(format!("{e:#}")))?;
            if !quiet {
                for c in &out.checks {
                    println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
                }
                println!("artifacts in {}", dir.display());
            }
            Ok(out.passed())
        }
        Err(RunError::Config(e)) => Err(Failure::Usage(e.to_string())),
        Err(e @ RunError::Stage { .. }) => {
            let msg = e.to_string();
            if let RunError::Stage { stages, .. } = &e {
                let _ = output::write_failure(dir, cfg, stages, t0.elapsed().as_secs_f64(), &msg);
            }
            Err(Failure::Run(msg))
        }
    }
}

fn parse_value(v: &str) -> toml::Value {
    format!("v = {v}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(v.to_string()))
}

fn set_path(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), Failure> {
    let mut keys: Vec<&str> = path.split('.').collect();
    let last =
        keys.pop().filter(|k| !k.is_empty()).ok_or_else(|| Failure::Usage(format!("--set: empty path in `{path}`")))?;
    let mut cur = table;
    for k in keys {
        let entry = cur.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| Failure::Usage(format!("--set: `{k}` in `{path}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn variants(base: &toml::Table, sets: &[String]) -> Result<Vec<(String, toml::Table)>, Failure> {
    let mut out = vec![(String::new(), base.clone())];
    for s in sets {
        let (path, values) =
            s.split_once('=').ok_or_else(|| Failure::Usage(format!("--set `{s}`: expected PATH=V1,V2,...")))?;
        let mut next = Vec::new();
        for (name, t) in &out {
            for v in values.split(',') {
                let mut t = t.clone();
                set_path(&mut t, path, parse_value(v.trim()))?;
                let tag = format!("{path}={}", v.trim()).replace(['/', ' '], "_");
                next.push((if name.is_empty() { tag } else { format!("{name}__{tag}") }, t));
            }
        }
        out = next;
    }
    Ok(out)
}

fn main_inner(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Run { config, out, strict, seed } => {
            let cfg = resolve(&load(&config)?, seed)?;
            let dir = output_dir(&cfg, out);
            execute(&cfg, &dir, strict, false)
        }
        Command::Describe { config } => {
            let cfg = resolve(&load(&config)?, None)?;
            let plan = match describe(&cfg) {
                Ok(p) => p,
                Err(RunError::Config(e)) => return Err(Failure::Usage(e.to_string())),
                Err(e) => return Err(Failure::Run(e.to_string())),
            };
            println!("{}", serde_json::to_string_pretty(&plan).expect("json"));
            Ok(true)
        }
        Command::Sweep { config, out, sets, strict } => {
            let base = load(&config)?;
            let vs = variants(&base, &sets)?;
            let cfgs: Vec<(String, RunConfig)> =
                vs.into_iter().map(|(n, t)| resolve(&t, None).map(|c| (n, c))).collect::<Result<_, _>>()?;
            let root = output_dir(&cfgs[0].1, out);
            let results: Vec<(String, Result<bool, Failure>)> = cfgs
                .par_iter()
                .map(|(name, cfg)| {
                    let dir = if name.is_empty() { root.clone() } else { root.join(name) };
                    (name.clone(), execute(cfg, &dir, strict, true))
                })
                .collect();
            let mut all = true;
            for (name, r) in results {
                let label = if name.is_empty() { "base" } else { name.as_str() };
                match r {
                    Ok(true) => println!("[pass] {label}"),
                    Ok(false) => {
                        all = false;
                        println!("[FAIL] {label}: checks failed");
                    }
                    Err(Failure::Usage(m) | Failure::Run(m)) => {
                        all = false;
                        println!("[FAIL] {label}: {m}");
                    }
                }
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_expands_product() {
        let base: toml::Table = "experiment = \"breaking\"".parse().unwrap();
        let vs = variants(&base, &["grid.cells=32,64".into(), "seed=1,2,3".into()]).unwrap();
        assert_eq!(vs.len(), 6);
        assert_eq!(vs[0].0, "grid.cells=32__seed=1");
        assert_eq!(vs[0].1["grid"]["cells"].as_integer(), Some(32));
    }

    #[test]
    fn set_rejects_non_table_prefix() {
        let mut t: toml::Table = "seed = 1".parse().unwrap();
        assert!(set_path(&mut t, "seed.x", toml::Value::Integer(2)).is_err());
    }
}
