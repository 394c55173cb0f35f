//! Command-line front end: reproducible CSV datasets and verification
//! reports for the two-particle equilibrium statistics and the dephasing
//! beam-splitter array.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails or output
//! cannot be produced, 2 on usage errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pairstat::basis::Statistics;

mod bsarray;
mod hom;
mod report;
mod sweep;
mod verify;

#[derive(Parser)]
#[command(
    name = "pairstat",
    version,
    about = "Equilibrium statistics of two identical particles and the \
             dephasing beam-splitter array that produces them",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the coincidence probability P(1,1) over a temperature grid
    Sweep(sweep::SweepArgs),
    /// Run the dephasing beam-splitter array and record the trajectory
    Bsarray(bsarray::BsarrayArgs),
    /// Run seeded randomized verification suites over the core theorems
    Verify(verify::VerifyArgs),
    /// Report single-splitter coincidence probabilities from one particle
    /// per input port
    Hom(hom::HomArgs),
}

/// Which particle statistics a command covers.
#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StatsArg {
    Boson,
    Fermion,
    Both,
}

impl StatsArg {
    fn selected(self) -> Vec<Statistics> {
        match self {
            StatsArg::Boson => vec![Statistics::Boson],
            StatsArg::Fermion => vec![Statistics::Fermion],
            StatsArg::Both => vec![Statistics::Boson, Statistics::Fermion],
        }
    }
}

/// A single particle statistics, for commands that need exactly one.
#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SingleStatsArg {
    Boson,
    Fermion,
}

impl From<SingleStatsArg> for Statistics {
    fn from(arg: SingleStatsArg) -> Statistics {
        match arg {
            SingleStatsArg::Boson => Statistics::Boson,
            SingleStatsArg::Fermion => Statistics::Fermion,
        }
    }
}

/// Shared output flag.
#[derive(Args)]
struct OutArg {
    /// Write to this file instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

/// A command failure with its exit code semantics.
enum Failure {
    /// Bad flag combination or out-of-range value: exit 2.
    Usage(String),
    /// Valid request that could not be completed: exit 1.
    Runtime(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }
}

impl From<pairstat::Error> for Failure {
    fn from(e: pairstat::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep::run(&args),
        Command::Bsarray(args) => bsarray::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Hom(args) => hom::run(&args),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
