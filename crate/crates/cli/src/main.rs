//! `ztdp`: generate inputs, build and check decompositions, and count.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! and 2 on errors.

mod bench;
mod commands;
mod count;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ztdp", version, about = "Polynomial-space counting over tree decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph or hypergraph file.
    Gen {
        #[command(subcommand)]
        kind: commands::GenKind,
    },
    /// Build a tree decomposition and print its metrics.
    Decompose(commands::DecomposeArgs),
    /// Count with an engine and print a JSON run report.
    Count(count::CountArgs),
    /// Run engines over a range of uniform grids and print CSV.
    Bench(bench::BenchArgs),
    /// Check a decomposition file against an input.
    Validate(commands::ValidateArgs),
    /// Convert to a modified nice decomposition in JSON.
    Nice(commands::NiceArgs),
    /// Answer by exhaustive enumeration.
    Oracle(commands::OracleArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen { kind } => commands::cmd_gen(kind),
        Command::Decompose(a) => commands::cmd_decompose(a),
        Command::Count(a) => count::cmd_count(a),
        Command::Bench(a) => bench::cmd_bench(a),
        Command::Validate(a) => commands::cmd_validate(a),
        Command::Nice(a) => commands::cmd_nice(a),
        Command::Oracle(a) => commands::cmd_oracle(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
