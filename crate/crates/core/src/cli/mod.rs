//! The `sharpstep` command-line harness.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 oracle failure,
//! 4 verification failure.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::problems::ProblemError;
use crate::solver::SolveError;

pub use commands::{execute, RunOutcome};
pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Oracle(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    /// Short label used in sweep summaries.
    pub fn status_label(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config-error",
            CliError::Io(_) => "io-error",
            CliError::Oracle(_) => "oracle-failure",
            CliError::Verification(_) => "verification-failure",
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NonFiniteOracle { .. } => CliError::Oracle(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        match e {
            ProblemError::Io(io) => CliError::Io(io),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<crate::analysis::AnalysisError> for CliError {
    fn from(e: crate::analysis::AnalysisError) -> Self {
        match e {
            crate::analysis::AnalysisError::Solve(s) => s.into(),
            other => CliError::Verification(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sharpstep",
    version,
    about = "Subgradient methods for sharp weakly convex problems"
)]
pub struct Cli {
    /// Overrides `problem.seed` (and seeds the verify battery).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file or directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen {
        /// Config override, `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run one solver configuration and write its trace CSV.
    Run {
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Estimate mu, rho, L and tau by sampling around the solution set.
    Estimate {
        /// Instance file; without it the configured problem is generated.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Sampling radius; defaults to the instance's distance scale.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run one configuration per value of a config key.
    Sweep {
        /// Config key to vary, e.g. `problem.m`.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Check the convergence lemmas and theorems on closed-form instances.
    Verify,
}

fn load_config(cli: &Cli, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    for s in sets {
        cfg.set_pair(s)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.to_string_lossy().into_owned());
    }
    Ok(cfg)
}

fn require_out<'a>(cli: &'a Cli, what: &str) -> Result<&'a Path, CliError> {
    cli.out
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("`{what}` needs --out")))
}

/// Runs a parsed command; returns the text to print on success.
pub fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Gen { sets } => {
            let cfg = load_config(cli, sets)?;
            let out = require_out(cli, "gen")?;
            commands::cmd_gen(&cfg, out)
        }
        Command::Run { sets } => {
            let cfg = load_config(cli, sets)?;
            let outcome = execute(&cfg)?;
            let line = format!(
                "status={} iterations={} final_distance={}",
                outcome.trace.status.as_str(),
                outcome.trace.iterations(),
                outcome
                    .trace
                    .final_distance()
                    .map(|d| output::fmt_float(d / outcome.scale))
                    .unwrap_or_else(|| "NA".into())
            );
            match &cfg.output {
                Some(p) => {
                    commands::write_outcome(Path::new(p), &outcome)?;
                    Ok(line)
                }
                None => Ok(outcome.csv),
            }
        }
        Command::Estimate {
            instance,
            samples,
            radius,
            sets,
        } => {
            let cfg = load_config(cli, sets)?;
            let inst = match instance {
                Some(path) => commands::load_instance(path)?.1,
                None => cfg.instance_spec()?.build()?,
            };
            let est = commands::cmd_estimate(&inst, *samples, *radius, cfg.seed)?;
            let text = format!("{}\n{est}", inst.summary());
            if let Some(out) = &cli.out {
                output::write_atomic(out, &(text.clone() + "\n"))?;
            }
            Ok(text)
        }
        Command::Sweep { axis, values, sets } => {
            let mut cfg = load_config(cli, sets)?;
            cfg.output = None;
            let dir = require_out(cli, "sweep")?;
            let rows = commands::cmd_sweep(&cfg, axis, values, dir)?;
            Ok(output::summary_csv(&rows))
        }
        Command::Verify => {
            let report = verify::run_battery(cli.seed.unwrap_or(1))?;
            let text = report.to_string();
            if let Some(out) = &cli.out {
                output::write_atomic(out, &text)?;
            }
            if report.all_passed() {
                Ok(text)
            } else {
                Err(CliError::Verification(format!(
                    "{} check(s) failed\n{text}",
                    report.failures().count()
                )))
            }
        }
    }
}

/// Parses `args` (including the program name), runs, prints, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
