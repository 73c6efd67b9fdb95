mod cli;
mod commands;
mod config;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cli::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
        Command::Weight(a) => commands::weight(a),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
