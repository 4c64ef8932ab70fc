//! Argument parsing and command dispatch.
//!
//! Exit status: 0 when every check passes, 1 for usage or configuration
//! errors, 2 when a check fails or an operator is invalid.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::config::{parse_slits, RunConfig};
use crate::error::CliError;
use crate::suites;
use crate::{json, validate};

#[derive(Debug, Parser)]
#[command(name = "iopsim", version, about = "Information-operator scenarios, invariant suites and operator validation")]
pub struct Cli {
    /// Seed for sampled sub-runs.
    #[arg(long, global = true, env = "IOPSIM_SEED")]
    pub seed: Option<u64>,
    /// Reduced Planck constant used by every propagator.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Tolerance override, e.g. `--tol algebra=1e-10`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print JSON instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario: stern-gerlach, cat, spin-one or two-slit.
    Run(RunArgs),
    /// Check the operators in a JSON file against the i-operator conditions.
    Validate {
        file: PathBuf,
    },
    /// Run the randomised invariant suites.
    Selftest {
        /// Random cases per dimension and per suite.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario name; may be omitted when `--config` names one.
    pub scenario: Option<String>,
    /// JSON run configuration; flags given alongside override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// stern-gerlach: prior probability of spin up.
    #[arg(long)]
    pub p_up: Option<f64>,
    /// cat: probability of the "+" label.
    #[arg(long)]
    pub p_plus: Option<f64>,
    /// cat, two-slit: number of development steps.
    #[arg(long)]
    pub steps: Option<u64>,
    /// cat, two-slit: duration of one step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// two-slit: number of grid sites.
    #[arg(long)]
    pub grid: Option<u64>,
    /// two-slit: open slits as half-open ranges, e.g. `40:44,84:88`.
    #[arg(long, value_name = "A:B,C:D")]
    pub slits: Option<String>,
    /// two-slit: passage probability.
    #[arg(long)]
    pub p_pass: Option<f64>,
    /// two-slit: incident packet width in sites.
    #[arg(long)]
    pub width: Option<f64>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.to_string(), value))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("serialisable");
    s.push('\n');
    s
}

/// Builds the run configuration from the config file and flags.
pub fn run_config(cli: &Cli, args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = RunConfig::from_json(&read(path)?)?;
            if let Some(name) = &args.scenario {
                if name != &cfg.scenario {
                    return Err(CliError::Usage(format!(
                        "scenario `{name}` conflicts with `{}` in {}",
                        cfg.scenario,
                        path.display()
                    )));
                }
            }
            cfg
        }
        None => {
            let name = args
                .scenario
                .as_deref()
                .ok_or_else(|| CliError::Usage("run needs a scenario name or --config".into()))?;
            RunConfig::new(name)
        }
    };
    let mut set = |key: &str, v: Option<Json>| {
        if let Some(v) = v {
            cfg.params.insert(key.to_string(), v);
        }
    };
    set("p_up", args.p_up.map(|x| json!(x)));
    set("p_plus", args.p_plus.map(|x| json!(x)));
    set("steps", args.steps.map(|x| json!(x)));
    set("dt", args.dt.map(|x| json!(x)));
    set("grid", args.grid.map(|x| json!(x)));
    set("p_pass", args.p_pass.map(|x| json!(x)));
    set("width", args.width.map(|x| json!(x)));
    if let Some(s) = &args.slits {
        let pairs: Vec<[usize; 2]> = parse_slits(s)?.into_iter().map(|(a, b)| [a, b]).collect();
        cfg.params.insert("slits".into(), json!(pairs));
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(hbar) = cli.hbar {
        cfg.hbar = hbar;
    }
    for (name, value) in &cli.tol {
        cfg.tolerances.insert(name.clone(), *value);
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn run(cli: &Cli, args: &RunArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = run_config(cli, args)?;
    let report = cfg.run()?;
    let text = json::report_string(&report);
    if let Some(path) = &cfg.out {
        write_out(path, &text)?;
    }
    if cli.json {
        stdout.write_all(text.as_bytes()).ok();
    } else {
        let passed = report.checks.iter().filter(|c| c.passed).count();
        writeln!(stdout, "{}: {}/{} checks passed", report.name, passed, report.checks.len()).ok();
        for c in &report.checks {
            writeln!(
                stdout,
                "  {} [{}] {} (value {:.3e}, tol {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.kind.as_str(),
                c.description,
                c.residual,
                c.tolerance
            )
            .ok();
        }
        for note in &report.notes {
            writeln!(stdout, "  note: {note}").ok();
        }
    }
    Ok(if report.all_passed() { 0 } else { 2 })
}

fn validate_file(cli: &Cli, file: &Path, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let operators = json::parse_operators(&read(file)?)?;
    let verdicts: Vec<validate::Verdict> = operators.iter().map(validate::check).collect();
    let doc = Json::Array(verdicts.iter().enumerate().map(|(i, v)| v.to_json(i)).collect());
    if let Some(path) = &cli.out {
        write_out(path, &pretty(&doc))?;
    }
    if cli.json {
        stdout.write_all(pretty(&doc).as_bytes()).ok();
    } else {
        for (i, v) in verdicts.iter().enumerate() {
            let verdict = match &v.error {
                None => String::from("valid"),
                Some((kind, msg)) => format!("invalid, {kind}: {msg}"),
            };
            writeln!(
                stdout,
                "operator {i} (dim {}): {verdict}; hermiticity residual {:.3e}, trace residual {:.3e}, min eigenvalue {:.6e}",
                v.dim, v.hermiticity, v.trace, v.min_eigenvalue
            )
            .ok();
        }
    }
    Ok(if verdicts.iter().all(validate::Verdict::valid) { 0 } else { 2 })
}

fn selftest(cli: &Cli, cases: usize, stdout: &mut dyn Write) -> Result<u8, CliError> {
    if cases == 0 {
        return Err(CliError::BadParameter("--cases must be positive".into()));
    }
    let results = suites::run_all(cases, cli.seed.unwrap_or(0));
    let doc = Json::Array(
        results
            .iter()
            .map(|r| {
                json!({
                    "suite": r.name,
                    "passed": r.passed(),
                    "cases": r.cases,
                    "worst": json::number(r.worst),
                    "tolerance": json::number(r.tolerance),
                    "errors": r.errors,
                })
            })
            .collect(),
    );
    if let Some(path) = &cli.out {
        write_out(path, &pretty(&doc))?;
    }
    if cli.json {
        stdout.write_all(pretty(&doc).as_bytes()).ok();
    } else {
        for r in &results {
            writeln!(stdout, "{r}").ok();
        }
    }
    Ok(if results.iter().all(suites::SuiteResult::passed) { 0 } else { 2 })
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Run(args) => run(cli, args, stdout),
        Command::Validate { file } => validate_file(cli, file, stdout),
        Command::Selftest { cases } => selftest(cli, *cases, stdout),
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
