//! Batch front end: parses problem configurations, runs the pipeline
//! (optionally over a parameter grid, in parallel), and writes
//! human-readable summaries (stderr) plus machine-checkable JSON
//! certificates (stdout or --out, written atomically).
//!
//! Exit codes: 0 all verdicts true; 1 a verdict is false; 2 malformed
//! configuration; 3 invalid mathematical input; 4 insufficient precision.

mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "wittlift",
    version,
    about = "Constructs and verifies characteristic-0 lifts of Z/4 covers in characteristic 2"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full lifting pipeline and emit certificates.
    Lift(CommonArgs),
    /// Degeneration type of an order-2 character, with an optional hint.
    Swan(CommonArgs),
    /// Ramification breaks and conductor of a Witt vector.
    Breaks(CommonArgs),
    /// Run the independent cross-checks on their own.
    Oracle(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON output here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate options.grid instead of the single problem.
    #[arg(long)]
    grid: bool,
    /// Embed oracle cross-check reports in the certificates.
    #[arg(long)]
    oracle: bool,
    /// Seed for the randomized oracle suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the ring precision (in pi-units).
    #[arg(long)]
    precision: Option<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Lift(args) => run::lift(args),
        Cmd::Swan(args) => run::swan(args),
        Cmd::Breaks(args) => run::breaks(args),
        Cmd::Oracle(args) => run::oracle(args),
    };
    match outcome {
        Ok(all_good) => {
            if all_good {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::exit_code_for(&e))
        }
    }
}
