//! `machin`: generate, verify and evaluate two-term Machin-like formulas.
//!
//! Exit codes: 0 success, 1 invalid result, 2 usage or parse error,
//! 3 precision failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use machin::Error;

/// Default precision, overridable through `MACHIN_PRECISION`.
pub const DEFAULT_PRECISION: u32 = 50;
pub const DEFAULT_GUARD: u32 = 10;

#[derive(Parser, Debug)]
#[command(name = "machin", version, about = "Two-term Machin-like formulas for pi")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Options shared by all subcommands.
#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Decimal digits of working precision
    #[arg(long = "precision", global = true, env = "MACHIN_PRECISION",
          default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision_digits: u32,

    /// Guard digits carried beyond the precision
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    pub guard: u32,

    #[arg(long = "format", global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output_format: OutputFormat,

    /// Write the primary output to this file instead of stdout
    #[arg(long = "out", global = true)]
    pub out_path: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// surd-free doubling recurrence
    Iter,
    /// nested radicals
    Radical,
    /// both, with a MATCH/MISMATCH verdict
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Machin,
    Kanada1,
    Kanada2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesArg {
    Maclaurin,
    Euler,
    Gh,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchSeries {
    All,
    Maclaurin,
    Euler,
    Gh,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first constant u1 for a given k
    U1 {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Method::Iter)]
        method: Method,
    },
    /// Emit the two-term formula for k as JSON
    Formula {
        #[arg(long)]
        k: u32,
        /// Allow k above the materialisation cap
        #[arg(long)]
        force: bool,
        /// Integers with more digits go to sidecar files (needs --out)
        #[arg(long, default_value_t = machin::machin::json::SIDECAR_THRESHOLD_DIGITS)]
        sidecar_threshold: usize,
    },
    /// Check a formula exactly
    Verify {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        formula: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
    },
    /// Compute digits of pi
    Pi {
        /// Decimals after the point
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        digits: Option<u32>,
        #[arg(long, conflicts_with = "formula")]
        k: Option<u32>,
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SeriesArg::Euler)]
        series: SeriesArg,
        /// Use the quadratically convergent iteration instead of a formula
        #[arg(long, conflicts_with = "formula")]
        quad: bool,
        #[arg(long, requires = "quad")]
        iters: Option<u32>,
    },
    /// Print Lehmer's measure
    Lehmer {
        #[arg(long, conflicts_with_all = ["builtin", "k"])]
        formula: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "k")]
        builtin: Option<Builtin>,
        #[arg(long)]
        k: Option<u32>,
        /// Estimate through the trigonometric form instead of materialising u2
        #[arg(long, requires = "k")]
        estimate: bool,
    },
    /// Time pi computations per series and k (CSV: series,k,digits,millis)
    Bench {
        #[arg(long, value_enum, default_value_t = BenchSeries::All)]
        series: BenchSeries,
        /// Inclusive range such as 6..10
        #[arg(long, default_value = "6..10")]
        k_range: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
    },
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::DegenerateAngle | Error::Consistency { .. } => 1,
            Error::Invalid(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::ConvergenceDomain(_)
            | Error::MaterializationCap { .. } => 2,
            Error::PrecisionExhausted(_)
            | Error::PoleProximity { .. }
            | Error::FloorAmbiguity { .. }
            | Error::Divergence { .. } => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    let result = match cli.command {
        Command::U1 { k, method } => commands::u1(cfg, k, method),
        Command::Formula {
            k,
            force,
            sidecar_threshold,
        } => commands::formula(cfg, k, force, sidecar_threshold),
        Command::Verify { formula, builtin } => commands::verify(cfg, formula, builtin),
        Command::Pi {
            digits,
            k,
            formula,
            series,
            quad,
            iters,
        } => {
            if quad {
                commands::pi_quad(cfg, k, iters, digits)
            } else {
                commands::pi(cfg, digits, k, formula, series)
            }
        }
        Command::Lehmer {
            formula,
            builtin,
            k,
            estimate,
        } => commands::lehmer(cfg, formula, builtin, k, estimate),
        Command::Bench {
            series,
            k_range,
            digits,
        } => commands::bench(cfg, series, &k_range, digits),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
