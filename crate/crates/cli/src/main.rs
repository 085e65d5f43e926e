mod args;
mod commands;
mod config;
mod report;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::Usage;

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::List(a) => commands::list(a),
        Command::Verify(a) => verify::run(a),
        Command::Sample(a) => commands::sample(a),
        Command::Eliminate(a) => commands::eliminate(a),
        Command::Orbit(a) => commands::orbit(a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
