use std::process::ExitCode;

use clap::Parser;

use sectorplan_cli::commands::{run, Cli, Outcome};

fn main() -> ExitCode {
    // Flag errors exit with status 2 from inside `parse`.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::NoPathFound) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
