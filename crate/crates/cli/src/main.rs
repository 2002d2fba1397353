use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod output;
mod verify;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
