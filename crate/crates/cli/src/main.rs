mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Search(a) => commands::search(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => commands::bench(a),
        Command::Generate(a) => commands::generate(a),
        Command::Partition(a) => commands::partition(a),
        Command::Worker(a) => commands::worker(a),
        Command::Coordinate(a) => commands::coordinate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("subseq-dtw: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
