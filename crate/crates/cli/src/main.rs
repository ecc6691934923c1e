//! `triqubit`: entanglement measures of pure three-qubit states.

mod commands;
mod input;
mod record;

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Discrepancy(String),
    #[error("{0}")]
    SuiteFailure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Discrepancy(_) => 2,
            CliError::SuiteFailure(_) => 3,
        }
    }
}

impl From<triqubit::Error> for CliError {
    fn from(e: triqubit::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("output: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "triqubit",
    version,
    about = "Tangles, entropies and invariants of pure three-qubit states"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Rescale input states to unit norm instead of rejecting them.
    #[arg(long, global = true)]
    pub normalize: bool,
    /// Cross-check closed-form values against the density-matrix oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All measures of one state.
    Measures {
        /// Preset name (ghz, w, G, kappa, vartheta, omega:<l4>, varkappa:<l2>), JSON file, or - for stdin.
        state: String,
    },
    /// Recompute the reference table of GHZ, W, G, kappa and vartheta.
    Table5,
    /// CSV of measures for random states.
    Sweep {
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SweepKind::Haar)]
        kind: SweepKind,
    },
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Samples per suite (per case for ckw).
        #[arg(long, short, default_value_t = 1000)]
        n: usize,
    },
    /// SLOCC class and tangle profile of a Schmidt-form state.
    Classify { state: String },
    /// Schmidt-form state with the given pairwise tangles p^4, q^4, r^4.
    Reconstruct { p4: String, q4: String, r4: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Haar,
    Asd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Propositions,
    Averages,
    Monogamy,
    Ckw,
    Extrema,
    All,
}

fn open_output(cli: &Cli) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cli.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut out = open_output(cli)?;
    let result = match &cli.command {
        Command::Measures { state } => commands::measures(cli, state, &mut out),
        Command::Table5 => commands::table5(cli, &mut out),
        Command::Sweep { n, kind } => commands::sweep(cli, *n, *kind, &mut out),
        Command::Verify { suite, n } => commands::verify(cli, *suite, *n, &mut out),
        Command::Classify { state } => commands::classify(cli, state, &mut out),
        Command::Reconstruct { p4, q4, r4 } => commands::reconstruct(cli, [p4, q4, r4], &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    // usage errors are input errors; clap's own exit code 2 is reserved
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
