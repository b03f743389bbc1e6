//! Command-line interface: constants tables, figure data, norm moments, and
//! seeded verification suites.
//!
//! Exit status: 0 success, 1 statistical violation, 2 usage or parse error,
//! 3 numerical-tolerance failure.

mod commands;
mod config;
mod output;

use std::fmt;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{constants, figure, moment, verify};
use output::{envelope, Json};

/// Documented default seed for reproducible runs.
pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Tolerance(String),
}

impl CmdError {
    fn usage(msg: impl Into<String>) -> Self {
        CmdError::Usage(msg.into())
    }

    /// Classify library errors: tolerance problems exit 3, everything else
    /// is a bad request and exits 2.
    fn numeric(e: moment_ineq::Error) -> Self {
        match e {
            moment_ineq::Error::Tolerance { .. } | moment_ineq::Error::NearZeroOrder { .. } => {
                CmdError::Tolerance(e.to_string())
            }
            other => CmdError::Usage(other.to_string()),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 2,
            CmdError::Tolerance(_) => 3,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Usage(m) => write!(f, "error: {m}"),
            CmdError::Tolerance(m) => write!(f, "numerical tolerance failure: {m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every random stream in the run.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Parser)]
#[command(
    name = "moment-ineq",
    version,
    about = "Sharp constants, characteristic-functional moments, and seeded verification of moment inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of the named constants at a given exponent and dimension.
    Constants {
        /// Exponent p > 0.
        #[arg(long)]
        p: f64,
        /// Ambient dimension d >= 1.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ratio of the earlier combined pairwise factor to 4/(2-p) over a grid.
    Figure {
        /// Grid as lo:hi:step, strictly inside (1, 2).
        #[arg(long = "p-grid", default_value = "1.01:1.99:0.01")]
        p_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm moment E ||X||^p of a model descriptor.
    Moment {
        /// Model descriptor, e.g. "gaussian(dim=3, cov=identity)".
        #[arg(long)]
        model: String,
        /// Exponent p > 0.
        #[arg(long)]
        p: f64,
        /// cf, mc, analytic, or all.
        #[arg(long, default_value = "all")]
        method: String,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded verification suites with per-check verdicts.
    Verify {
        /// Comma-separated subset of: vbe, symmetric-vbe, two-point,
        /// iid-diff, pairwise, spread, cross-dim, tightness.
        #[arg(
            long,
            default_value = "vbe,symmetric-vbe,two-point,iid-diff,pairwise,spread,cross-dim,tightness"
        )]
        check: String,
        /// Exponent override where a check takes a single p.
        #[arg(long)]
        p: Option<f64>,
        /// Optional model descriptor: the model-driven checks also run on it.
        #[arg(long)]
        model: Option<String>,
        /// Sample paths per randomized spec.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Number of randomized specs in the statistical suite.
        #[arg(long, default_value_t = 210)]
        specs: usize,
        /// Random triples in the exact two-point sweep.
        #[arg(long = "two-point-trials", default_value_t = 100_000)]
        two_point_trials: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(
    output: &OutputArgs,
    command: &str,
    json_payload: Json,
    csv: String,
) -> Result<(), CmdError> {
    let text = match output.format {
        Format::Json => envelope(command, output.seed, json_payload).render(),
        Format::Csv => csv,
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CmdError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CmdError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<i32, CmdError> {
    match cli.command {
        Command::Constants { p, d, output } => {
            let (json, csv) = constants::run(&constants::ConstantsRequest { p, d })?;
            emit(&output, "constants", json, csv)?;
            Ok(0)
        }
        Command::Figure { p_grid, output } => {
            let grid = config::parse_grid(&p_grid).map_err(|e| CmdError::usage(e.to_string()))?;
            let (json, csv) = figure::run(&figure::FigureRequest { grid })?;
            emit(&output, "figure", json, csv)?;
            Ok(0)
        }
        Command::Moment {
            model,
            p,
            method,
            samples,
            output,
        } => {
            let parsed = config::parse_model(&model).map_err(|e| CmdError::usage(e.to_string()))?;
            let method = moment::Method::parse(&method)?;
            let (json, csv) = moment::run(&moment::MomentRequest {
                model: parsed,
                descriptor: model,
                p,
                method,
                samples,
                seed: output.seed,
            })?;
            emit(&output, "moment", json, csv)?;
            Ok(0)
        }
        Command::Verify {
            check,
            p,
            model,
            samples,
            specs,
            two_point_trials,
            output,
        } => {
            let checks = verify::CheckSelect::parse_list(&check)?;
            let model = model
                .map(|descriptor| {
                    config::parse_model(&descriptor)
                        .map(|m| (descriptor, m))
                        .map_err(|e| CmdError::usage(e.to_string()))
                })
                .transpose()?;
            let outcome = verify::run(&verify::VerifyRequest {
                checks,
                p,
                samples,
                specs,
                seed: output.seed,
                two_point_trials,
                model,
            })?;
            emit(&output, "verify", outcome.json, outcome.csv)?;
            Ok(outcome.exit_code)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
