use std::process::ExitCode;

use clap::Parser;
use wavecharge_cli::{load_config, run, Cli, DriftExceeded};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(cli.command.args()).and_then(|cfg| run(&cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<DriftExceeded>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
