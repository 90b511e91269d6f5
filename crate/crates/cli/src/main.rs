use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod compare;
mod input;

use commands::{AnalyticArgs, PropertiesArgs};
use compare::{run_compare, summary_line, CompareOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("observed property matrix differs from the reference table in {0} cell(s)")]
    TableMismatch(usize),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verify(_) => 3,
            CliError::TableMismatch(_) => 4,
        }
    }
}

impl From<dominance_core::Error> for CliError {
    fn from(e: dominance_core::Error) -> Self {
        use dominance_core::Error as E;
        match e {
            E::NumericFailure { .. } | E::GridMismatch { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dominance",
    version,
    about = "Compare two samples of a minimized metric with cumulative difference-plots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two sample files and emit the plot, curves and report.
    Compare {
        /// Sample file for algorithm A, one value per line.
        #[arg(long)]
        a: PathBuf,
        /// Sample file for algorithm B.
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Treat larger values as better by negating both samples.
        #[arg(long)]
        maximize: bool,
        /// SVG plot path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// CSV path for the curve and its band.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Cross-check the estimates against the brute-force references.
        #[arg(long)]
        verify: bool,
    },
    /// Evaluate the measures on two mixture specifications.
    Analytic {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Also draw n samples from each model and run the empirical comparison.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Check which properties each measure satisfies on randomized trials.
    Properties {
        /// Measure id, or `all` for every measure in the reference table.
        #[arg(long, default_value = "all")]
        measure: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compare { a, b, alpha, resamples, seed, maximize, out, report, csv, verify } => {
            let labels = (input::label(&a), input::label(&b));
            let sa = input::read_samples(&a)?;
            let sb = input::read_samples(&b)?;
            let opts = CompareOptions { alpha, resamples, seed, maximize, out, report, csv, verify, labels };
            let report = run_compare(sa, sb, &opts)?;
            println!("{}", summary_line(&report));
            Ok(())
        }
        Command::Analytic { a, b, tol, n, seed } => commands::analytic(&AnalyticArgs { a, b, tol, n, seed }),
        Command::Properties { measure, trials, seed, tol, report } => {
            commands::properties(&PropertiesArgs { measure, trials, seed, tol, report })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
