//! `mockpadic`: the Delta reproduction, limit computations, property suites
//! and data ingestion.
//!
//! Exit status: 0 success, 1 mismatch or failure, 2 configuration error.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Report};
use config::{read_config_file, Format, Overrides, RunConfig, SeedSource};

#[derive(Parser, Debug)]
#[command(name = "mockpadic", version, about = "p-adic corrections of mock modular forms")]
struct Cli {
    /// `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Highest exponent of the seed expansion (default max(6561, p^max_m)).
    #[arg(long = "q-prec", global = true)]
    q_prec: Option<i64>,
    /// p-adic digits carried.
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[arg(long = "max-m", global = true)]
    max_m: Option<u32>,
    /// `builtin-delta` or a mockplus file.
    #[arg(long, global = true)]
    seed: Option<SeedSource>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write the report into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run a single property suite.
    #[arg(long, global = true)]
    suite: Option<String>,
    #[arg(long = "seed-rng", global = true)]
    seed_rng: Option<u64>,
    /// Randomized cases per identity.
    #[arg(long, global = true)]
    cases: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Seed, correction constants, digit tables and congruence ladder for Delta.
    DemoDelta,
    /// Randomized invariant suites.
    Properties,
    /// A single limit with its certificate.
    Limits {
        #[arg(value_enum)]
        which: LimitKind,
    },
    /// Parse and check a form file.
    Ingest { path: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LimitKind {
    Gamma,
    Delta,
    Inert,
    Badprime,
}

impl LimitKind {
    fn name(self) -> &'static str {
        match self {
            LimitKind::Gamma => "gamma",
            LimitKind::Delta => "delta",
            LimitKind::Inert => "inert",
            LimitKind::Badprime => "badprime",
        }
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, String> {
    let file = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => Overrides::default(),
    };
    let flags = Overrides {
        prime: cli.prime,
        q_prec: cli.q_prec,
        digits: cli.digits,
        max_m: cli.max_m,
        seed: cli.seed.clone(),
        format: cli.format,
        out: cli.out.clone(),
        suite: cli.suite.clone(),
        seed_rng: cli.seed_rng,
        cases: cli.cases,
    };
    RunConfig::resolve(flags, file)
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), String> {
    let json = serde_json::to_string_pretty(&report.json).expect("serializable");
    match cfg.format {
        Format::Text => print!("{}", report.text),
        Format::Json => println!("{json}"),
    }
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let (ext, body) = match cfg.format {
            Format::Text => ("txt", report.text.clone()),
            Format::Json => ("json", json),
        };
        let path = dir.join(format!("{}.{ext}", report.name));
        fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::DemoDelta => commands::demo_delta(&cfg),
        Command::Properties => commands::properties(&cfg),
        Command::Limits { which } => commands::limits(&cfg, which.name()),
        Command::Ingest { path } => commands::ingest(path),
    };
    match result {
        Ok(report) => {
            if let Err(msg) = emit(&cfg, &report) {
                eprintln!("configuration error: {msg}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
