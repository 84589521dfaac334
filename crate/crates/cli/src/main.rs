//! `ldl` drives the discriminative-lexicon pipeline from configuration:
//! ingest a word dataset, build cue and semantic matrices, fit the
//! comprehension and production maps, decode forms, and export measures.

mod config;
mod manifest;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::CommonArgs;
use pipeline::CliResult;

#[derive(Parser)]
#[command(
    name = "ldl",
    version,
    about = "Linear discriminative learning over word form and meaning spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit comprehension and production maps, evaluate, and write artifacts
    Fit {
        #[command(flatten)]
        common: CommonArgs,
        /// Skip positional fitting and path decoding
        #[arg(long)]
        skip_production: bool,
    },
    /// Recompute comprehension accuracy from stored artifacts
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the full correlation matrix as csv
        #[arg(long)]
        correlations_out: Option<PathBuf>,
    },
    /// Decode word forms through the stored comprehension map
    Produce {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write distance, support, projection, and optional pair measures
    Measures {
        #[command(flatten)]
        common: CommonArgs,
        /// csv of prime,target form pairs to score
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Project stored production cue vectors onto two principal components
    Project {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulate semantic vectors and write them without fitting
    SimulateSemantics {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(command: &Command) -> CliResult<()> {
    match command {
        Command::Fit {
            common,
            skip_production,
        } => pipeline::run_fit(&common.resolve()?, *skip_production),
        Command::Evaluate {
            common,
            correlations_out,
        } => pipeline::run_evaluate(&common.resolve()?, correlations_out.as_ref()),
        Command::Produce { common } => pipeline::run_produce(&common.resolve()?),
        Command::Measures { common, pairs } => {
            pipeline::run_measures(&common.resolve()?, pairs.as_ref())
        }
        Command::Project { common } => pipeline::run_project(&common.resolve()?),
        Command::SimulateSemantics { common } => pipeline::run_simulate(&common.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
