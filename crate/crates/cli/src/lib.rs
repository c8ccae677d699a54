//! Command-line front end `hfrac`: verification suites, parameter sweeps,
//! scaling experiments and type-set emission with deterministic output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub mod commands;
pub mod table;

pub use commands::{DyadicArgs, NuSweepArgs, OscillatoryArgs, ScalingArgs, TypesetArgs, VerifyArgs};

#[derive(Debug, Parser)]
#[command(name = "hfrac", version, about = "Fractional measures on the Heisenberg group: checks and experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-set geometry and point classification.
    Typeset(TypesetArgs),
    /// Closed form against quadrature for the Laguerre transform, and the binomial sum.
    VerifyLemmas(VerifyArgs),
    /// Diagonal entries against the endpoint bound.
    NuSweep(NuSweepArgs),
    /// Box test-function exponents.
    Scaling(ScalingArgs),
    /// Total variation of dyadic pieces.
    Dyadic(DyadicArgs),
    /// Van der Corput normalised oscillatory sups.
    Oscillatory(OscillatoryArgs),
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct Common {
    /// Pass/fail tolerance (command specific default).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// csv, json or svg (typeset only).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Seed for sampled points.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// JSON file with the same field names as the flags (snake_case).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(heisenberg_fractional::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "invalid configuration: {s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<heisenberg_fractional::Error> for CliError {
    fn from(e: heisenberg_fractional::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use heisenberg_fractional::Error as E;
        match self {
            CliError::Core(E::ToleranceNotMet { .. } | E::NonFinite(_) | E::OutsideBoundRegime(_)) => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// The main artifact, written to `--out` or stdout.
    pub document: String,
    /// Extra lines always printed on stdout.
    pub notes: String,
    pub passed: bool,
}

/// Overlay the flags given on the command line onto the `--config` file.
pub fn merge_config<T: Serialize + DeserializeOwned>(cli: &T, path: Option<&PathBuf>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(serde_json::from_value(serde_json::to_value(cli).map_err(json_err)?).map_err(json_err)?);
    };
    let text = std::fs::read_to_string(path)?;
    let mut base: Value = serde_json::from_str(&text).map_err(json_err)?;
    let over = serde_json::to_value(cli).map_err(json_err)?;
    let (Some(b), Some(o)) = (base.as_object_mut(), over.as_object()) else {
        return Err(CliError::Config("config file must hold a JSON object".into()));
    };
    for (k, v) in o {
        b.insert(k.clone(), v.clone());
    }
    serde_json::from_value(base).map_err(json_err)
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Config(e.to_string())
}

/// Run a parsed command inside a pool of `--jobs` workers.
pub fn run(cli: Cli) -> Result<(Outcome, Common), CliError> {
    let common = match &cli.command {
        Command::Typeset(a) => a.common.clone(),
        Command::VerifyLemmas(a) => a.common.clone(),
        Command::NuSweep(a) => a.common.clone(),
        Command::Scaling(a) => a.common.clone(),
        Command::Dyadic(a) => a.common.clone(),
        Command::Oscillatory(a) => a.common.clone(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = common.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let out = pool.install(|| match cli.command {
        Command::Typeset(a) => commands::typeset(&a),
        Command::VerifyLemmas(a) => commands::verify_lemmas(&a),
        Command::NuSweep(a) => commands::nu_sweep(&a),
        Command::Scaling(a) => commands::scaling(&a),
        Command::Dyadic(a) => commands::dyadic(&a),
        Command::Oscillatory(a) => commands::oscillatory(&a),
    })?;
    Ok((out, common))
}
