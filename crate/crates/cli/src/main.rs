//! `qqm`: batch runner for the quaternionic non-local box experiments.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! configuration error.

mod commands;
mod strategy;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{ConfigError, GateSet, Report};
use strategy::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "qqm",
    version,
    about = "Quaternionic quantum mechanics: PR boxes, CHSH and one-bit communication"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        value_enum,
        global = true,
        env = "QQM_FORMAT",
        default_value = "text"
    )]
    format: Format,

    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Add a Monte Carlo cross-check with this many samples per input.
    #[arg(long, global = true)]
    samples: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Behaviour table and CHSH value of a box, checked against x ⊕ y = ab.
    Prbox {
        /// classical | complex | quaternionic | ideal | noisy:<p>
        #[arg(long, default_value = "quaternionic")]
        strategy: Strategy,
    },
    /// CHSH winning probabilities; all reference strategies when none is given.
    Chsh {
        #[arg(long)]
        strategy: Option<Strategy>,
    },
    /// Exhaustive check of the one-bit protocol for a boolean function.
    Vandam {
        /// AND, XOR, IP<n>, or a truth-table JSON file.
        #[arg(long)]
        function: String,
        #[arg(long, default_value = "quaternionic")]
        strategy: Strategy,
    },
    /// Applies two local gates in both time orders and compares the results.
    OrderDemo {
        #[arg(long, value_enum, default_value = "quaternion")]
        gates: GateSet,
    },
}

fn run(cli: &Cli) -> Result<Report, ConfigError> {
    match &cli.command {
        Command::Prbox { strategy } => Ok(commands::run_prbox(*strategy, cli.seed, cli.samples)),
        Command::Chsh { strategy } => Ok(commands::run_chsh(*strategy)),
        Command::Vandam { function, strategy } => {
            let (name, f) = commands::resolve_function(function)?;
            commands::run_vandam(&name, &f, *strategy, cli.seed, cli.samples)
        }
        Command::OrderDemo { gates } => Ok(commands::run_order_demo(*gates)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&report.json).expect("json value") + "\n"
                }
                Format::Csv => report.csv,
                Format::Text => report.text,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
