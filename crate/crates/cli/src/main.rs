//! `sdprelax`: build, solve and benchmark eigenbasis-seeded linear relaxations
//! for max cut, sparse PCA and the Lovász theta number.

mod bench;
mod instance;
mod maxcut;
mod report;
mod spca;
mod theta;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::report::{CliError, OutputFormat};

#[derive(Parser, Debug)]
#[command(name = "sdprelax", version, about = "Eigenbasis-seeded LP/SOCP relaxations of semidefinite programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Max-cut relaxations SP/SD, rounding and baselines on one graph.
    Maxcut(maxcut::MaxcutArgs),
    /// Sparse principal components of a covariance matrix.
    Spca(spca::SpcaArgs),
    /// Linear approximations of the Lovász theta number.
    Theta(theta::ThetaArgs),
    /// Runs every `maxcut` line of a manifest and writes one report per line
    /// plus an aggregate table.
    Bench(bench::BenchArgs),
}

/// How the exact SDP value is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SdpRef {
    None,
    Conic,
    CuttingPlane,
}

/// Where the output of a single-report command goes.
#[derive(clap::Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::new("io", e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Maxcut(args) => {
            let rep = maxcut::run(&args, &[])?;
            emit(&args.output, &rep.render(args.output.format)?)?;
        }
        Command::Spca(args) => {
            let rep = spca::run(&args)?;
            emit(&args.output, &rep.render(args.output.format)?)?;
        }
        Command::Theta(args) => {
            let rep = theta::run(&args)?;
            emit(&args.output, &rep.render(args.output.format)?)?;
        }
        Command::Bench(args) => return bench::run(&args),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
