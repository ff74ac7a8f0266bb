//! Command-line front end for the pqbm toolkit.

mod commands;
mod config;
mod exec;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pqbm_core::measures::Estimator;
use serde_json::json;

use crate::config::{Command, Overrides, RunConfig, SchemaError};
use crate::exec::Threads;
use crate::report::{write_json, Outcome, Paths, SUMMARY_SCHEMA};

#[derive(Parser)]
#[command(name = "pqbm", version, about = "Numerical checks of (p,q) Brunn-Minkowski type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Midpoint deficits, concavity sweeps and dilates sweeps.
    CheckGlobal(Flags),
    /// Largest eigenvalue of the local form on smooth bodies.
    CheckLocal(Flags),
    /// Sufficient conditions evaluated on a table of parameters.
    Conditions(Flags),
    /// Measures of bodies with error estimates.
    Measure(Flags),
    /// Derivatives of measures along polytope interpolations.
    Polytope(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample budget; overrides the file.
    #[arg(long)]
    budget: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "pqbm-out")]
    out: PathBuf,
    /// Verdict tolerance; overrides the file.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for Monte Carlo chunks.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Sub {
    fn split(&self) -> (Command, &Flags) {
        match self {
            Sub::CheckGlobal(f) => (Command::CheckGlobal, f),
            Sub::CheckLocal(f) => (Command::CheckLocal, f),
            Sub::Conditions(f) => (Command::Conditions, f),
            Sub::Measure(f) => (Command::Measure, f),
            Sub::Polytope(f) => (Command::Polytope, f),
        }
    }
}

const EXIT_VERDICT: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn error_code(e: &anyhow::Error) -> u8 {
    if e.is::<SchemaError>() {
        return EXIT_SCHEMA;
    }
    match e.downcast_ref::<pqbm_core::Error>() {
        Some(pqbm_core::Error::Numeric(_) | pqbm_core::Error::DegenerateBasis(_)) => EXIT_NUMERIC,
        Some(_) => EXIT_SCHEMA,
        None => EXIT_VERDICT,
    }
}

fn load(command: Command, f: &Flags) -> Result<RunConfig> {
    let cfg = RunConfig::load(&f.config).map_err(|e| {
        if e.is::<SchemaError>() {
            e
        } else {
            config::schema!("{e:#}")
        }
    })?;
    if cfg.command != command {
        return Err(config::schema!(
            "config is for `{}`, not `{}`",
            cfg.command.name(),
            command.name()
        ));
    }
    if f.jobs == 0 {
        return Err(config::schema!("--jobs must be at least 1"));
    }
    cfg.resolve(Overrides {
        seed: f.seed,
        budget: f.budget,
        tol: f.tol,
    })
}

fn write(out: &Path, cfg: &RunConfig, o: &Outcome, status: &str, code: u8) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let paths = Paths::new(out, &cfg.name);
    o.main.write(&paths.csv)?;
    let mut files = vec![file_name(&paths.csv)];
    for (suffix, t) in &o.extra {
        let p = Paths::extra(out, &cfg.name, suffix);
        t.write(&p)?;
        files.push(file_name(&p));
    }
    std::fs::write(&paths.config, cfg.to_toml()?).with_context(|| format!("writing {}", paths.config.display()))?;
    files.push(file_name(&paths.config));
    let summary = json!({
        "summary_schema": SUMMARY_SCHEMA,
        "tool": "pqbm",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name(),
        "scenario": cfg.name,
        "expect_fail": cfg.expect_fail,
        "seed": cfg.seed,
        "budget": cfg.budget(),
        "method": cfg.method.method().name(),
        "tol": cfg.tol(),
        "rows": o.main.rows.len(),
        "verdicts": {
            "holds": o.tally.holds,
            "fails": o.tally.fails,
            "inconclusive": o.tally.inconclusive,
        },
        "status": status,
        "exit_code": code,
        "files": files,
        "cases": o.cases,
    });
    write_json(&paths.summary, &summary)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn execute(cli: &Cli) -> Result<u8> {
    let (command, flags) = cli.command.split();
    let cfg = load(command, flags)?;
    let threads = Threads(flags.jobs);
    let est = Estimator {
        method: cfg.method.method(),
        budget: cfg.budget(),
        seed: cfg.seed,
        executor: &threads,
    };
    let ctx = commands::Ctx {
        cfg: &cfg,
        est,
        base: flags.config.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let outcome = commands::run(&ctx)?;
    let failed = outcome.tally.fails > 0;
    let (status, code) = match (cfg.expect_fail, failed) {
        (false, false) => ("ok", 0),
        (false, true) => ("failed", EXIT_VERDICT),
        (true, true) => ("failed-as-expected", 0),
        (true, false) => ("unexpected-pass", EXIT_VERDICT),
    };
    write(&flags.out, &cfg, &outcome, status, code)?;
    println!(
        "{}: {} rows, {} holds, {} fails, {} inconclusive: {status}",
        cfg.name,
        outcome.main.rows.len(),
        outcome.tally.holds,
        outcome.tally.fails,
        outcome.tally.inconclusive
    );
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
