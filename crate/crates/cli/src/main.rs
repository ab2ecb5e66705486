mod args;
mod gen;
mod instrument;
mod output;
mod solve;
mod svg;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{Format, TieArg};

/// Reverse greedy k-median solver, instance generator and bound verifier.
#[derive(Debug, Parser)]
#[command(name = "rgreedy", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GlobalArgs {
    /// Output file (stdout when omitted).
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for generators and fuzz campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tie policy: lex, priority (the instance's list, lex if it has none) or random:SEED.
    #[arg(long, global = true, default_value = "priority")]
    pub tie: TieArg,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Allow the height-4 tree instance (hours of runtime).
    #[arg(long, global = true)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(gen::GenArgs),
    /// Run a greedy heuristic and write its trace.
    Solve(solve::SolveArgs),
    /// Solve k-median exactly by enumeration.
    Exact(solve::ExactArgs),
    /// Check inequalities on given instances or a seeded random corpus.
    Verify(verify::VerifyArgs),
    /// Ratio table over a family of instances.
    Sweep(sweep::SweepArgs),
    /// Ball and zone bookkeeping along a full reverse trace.
    Instrument(instrument::InstrumentArgs),
}

/// Result of a command that ran to completion.
pub enum Outcome {
    Ok,
    /// Some check did not hold.
    Violations,
    /// Some rows failed; carries the exit code.
    RowErrors(u8),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<rgreedy_core::Error>() {
            return args::error_code(e);
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Gen(a) => gen::run(a, g),
        Command::Solve(a) => solve::run_solve(a, g),
        Command::Exact(a) => solve::run_exact(a, g),
        Command::Verify(a) => verify::run(a, g),
        Command::Sweep(a) => sweep::run(a, g),
        Command::Instrument(a) => instrument::run(a, g),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Ok(Outcome::RowErrors(code)) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
