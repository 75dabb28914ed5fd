//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{parse_rat, Rat};
use crate::config::ExperimentConfig;
use crate::equi::{eq_measure, measure_distance_check, theorem_harness};
use crate::error::{Error, Result};
use crate::metrics::{dominance, metric_distance, separating_section, shilov_set, MetricSpec};
use crate::props;
use crate::solver::{solve_prescribed, SolveOptions};
use crate::ultra::DEFAULT_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

const DEFAULT_NMAX: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "shilov",
    version,
    about = "Sup norms and equidistribution for Shilov-finite metrics on P^d"
)]
pub struct Cli {
    /// Experiment file (TOML, or JSON by extension).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Largest degree in convergence reports.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Solver residual tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Initial precision cap for ultrametric elimination, in valuation units.
    #[arg(long, global = true, value_parser = parse_rat_arg)]
    pub prec: Option<Rat>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Target measure, comma separated, e.g. `3/4,1/4`.
    #[arg(long, global = true, value_parser = parse_target)]
    pub target: Option<Target>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shilov points, witnesses, dominance and separating sections.
    Shilov,
    /// Equidistribution measure.
    Lambda,
    /// Convergence report for the first configured section, as CSV.
    Limit,
    /// Distances to the `compare` metric.
    Distance,
    /// Shifts realizing a target measure.
    Solve,
    /// Randomized property suites.
    Props {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Run only this suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn parse_rat_arg(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s.trim()).map_err(|e| e.to_string())
}

/// A comma-separated list of rationals.
#[derive(Clone, Debug)]
pub struct Target(pub Vec<Rat>);

fn parse_target(s: &str) -> std::result::Result<Target, String> {
    s.split(',')
        .map(parse_rat_arg)
        .collect::<std::result::Result<_, _>>()
        .map(Target)
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_FAILURE
    }
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|(body, code)| {
        match &cli.out {
            Some(path) => File::create(path)?.write_all(body.as_bytes())?,
            None => stdout.write_all(body.as_bytes())?,
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Invalid("--config is required".into()))?;
    ExperimentConfig::load(path)
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

/// Output text and exit code of a successful run.
fn execute(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Props { seed, cases, suite } => run_props(*seed, *cases, suite.as_deref()),
        Command::Shilov => {
            let cfg = load(cli)?;
            Ok((pretty(&shilov_report(&cfg)?)?, EXIT_OK))
        }
        Command::Lambda => {
            let cfg = load(cli)?;
            let mu = eq_measure(&cfg.spec()?)?;
            Ok((pretty(&serde_json::to_value(mu)?)?, EXIT_OK))
        }
        Command::Limit => {
            let cfg = load(cli)?;
            let spec = cfg.spec()?;
            let sec = cfg.section(0)?;
            let nmax = cli.nmax.or(cfg.nmax).unwrap_or(DEFAULT_NMAX);
            let cap = cli
                .prec
                .clone()
                .or(cfg.prec.clone())
                .unwrap_or_else(|| Rat::from_integer(DEFAULT_CAP.into()));
            let report = theorem_harness(&spec, &sec, nmax, &cap)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            let code = if report.all_certified() { EXIT_OK } else { EXIT_FAILURE };
            Ok((String::from_utf8(buf).expect("csv is utf-8"), code))
        }
        Command::Distance => {
            let cfg = load(cli)?;
            let (s1, s2) = (cfg.spec()?, cfg.compare_spec()?);
            let dist = metric_distance(&s1, &s2)?;
            let mut v = json!({
                "d_inf": dist.d_inf.to_string(),
                "d_1": dist.d_1.to_string(),
                "d_1_exact": dist.d_1_exact,
            });
            if dist.d_1_exact {
                v["measure_check"] = serde_json::to_value(measure_distance_check(&s1, &s2)?)?;
            }
            Ok((pretty(&v)?, EXIT_OK))
        }
        Command::Solve => {
            let cfg = load(cli)?;
            let problem = cfg.solve_problem(cli.target.clone().map(|t| t.0))?;
            let opts = SolveOptions {
                tol: cli.tol.or(cfg.tol).unwrap_or(SolveOptions::default().tol),
                ..SolveOptions::default()
            };
            let res = solve_prescribed(&problem, &opts)?;
            Ok((pretty(&serde_json::to_value(res)?)?, EXIT_OK))
        }
    }
}

fn shilov_report(cfg: &ExperimentConfig) -> Result<Value> {
    let spec: MetricSpec = cfg.spec()?;
    let sh = shilov_set(&spec)?;
    let pts = spec.points();
    let mut dominated = Vec::new();
    for (z, pz) in pts.iter().enumerate() {
        for (w, pw) in pts.iter().enumerate() {
            if z != w && dominance(pz, pw) {
                dominated.push(json!({ "point": z, "by": w }));
            }
        }
    }
    let witnesses: Vec<Value> = sh
        .members
        .iter()
        .zip(&sh.witnesses)
        .map(|(a, u)| json!({ "point": a, "u": strings(u) }))
        .collect();
    let mut sections = Vec::new();
    for subset in &cfg.subsets {
        let f = separating_section(&spec, subset)?;
        sections.push(json!({ "subset": subset, "section": f.to_string() }));
    }
    Ok(json!({
        "shilov": sh.members,
        "witnesses": witnesses,
        "dominance": dominated,
        "sections": sections,
    }))
}

fn run_props(seed: u64, cases: usize, only: Option<&str>) -> Result<(String, i32)> {
    let reports = match only {
        Some(name) => {
            let s = props::suite(name).ok_or_else(|| Error::Invalid(format!("unknown suite {name}")))?;
            vec![s(seed, cases)?]
        }
        None => props::run_all(seed, cases)?,
    };
    let code = if reports.iter().all(props::PropReport::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok((pretty(&serde_json::to_value(reports)?)?, code))
}
