//! Command-line front end for `ptower-core`: JSON scenario configs, the
//! built-in suites and deterministic reports.

pub mod config;
pub mod report;
pub mod scenario;
pub mod suites;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, ScenarioConfig};
use report::Report;
use suites::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "ptower",
    version,
    about = "Finite-level checks for p-adic analytic towers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Element cap for materialized groups; overrides PTOWER_ELEMENT_CAP.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a built-in suite or every check a config supports.
    Verify {
        #[arg(value_enum)]
        suite: Option<Suite>,
        #[command(flatten)]
        common: Common,
    },
    /// Growth exponents for the rows of an exponent config.
    Exponents {
        #[command(flatten)]
        common: Common,
    },
    /// H1 classes and representatives.
    H1 {
        #[command(flatten)]
        common: Common,
    },
    /// Lower p-series orders.
    Series {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Verify { common, .. }
            | Command::Exponents { common }
            | Command::H1 { common }
            | Command::Series { common } => common,
        }
    }
}

fn require_config(common: &Common, what: &str) -> Result<(String, ScenarioConfig), ConfigError> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid(format!("{what} needs --config")))?;
    Ok((path.display().to_string(), config::load(path)?))
}

/// Runs one command. [`ConfigError`]s are usage errors; other errors come
/// from the computation itself.
pub fn run(command: &Command) -> anyhow::Result<Report> {
    let common = command.common();
    let cap = common.cap.unwrap_or_else(ptower_core::groups::default_cap);
    match command {
        Command::Verify { suite, common } => match (suite, &common.config) {
            (Some(s), None) => Ok(Report::new("verify", &s.name(), suites::run(*s, cap)?)),
            (None, Some(_)) => {
                let (target, cfg) = require_config(common, "verify")?;
                Ok(Report::new("verify", &target, scenario::verify(&cfg, cap)?))
            }
            (Some(_), Some(_)) => {
                Err(ConfigError::Invalid("give a suite or --config, not both".into()).into())
            }
            (None, None) => {
                Err(ConfigError::Invalid("give a suite name or --config".into()).into())
            }
        },
        Command::Exponents { common } => match &common.config {
            None => Ok(Report::new(
                "exponents",
                "built-in",
                scenario::exponent_records(&suites::reference_exponent_rows())?,
            )),
            Some(_) => {
                let (target, cfg) = require_config(common, "exponents")?;
                match cfg {
                    ScenarioConfig::Exponent { rows } => Ok(Report::new(
                        "exponents",
                        &target,
                        scenario::exponent_records(&rows)?,
                    )),
                    other => Err(ConfigError::Invalid(format!(
                        "exponents needs an exponent config, got {}",
                        other.kind()
                    ))
                    .into()),
                }
            }
        },
        Command::H1 { common } => {
            let (target, cfg) = require_config(common, "h1")?;
            Ok(Report::new("h1", &target, scenario::h1(&cfg, cap)?))
        }
        Command::Series { common } => {
            let (target, cfg) = require_config(common, "series")?;
            Ok(Report::new("series", &target, scenario::series(&cfg, cap)?))
        }
    }
}

/// Exit status for an error from [`run`]: 2 for usage and config errors.
pub fn error_exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        2
    } else {
        1
    }
}
