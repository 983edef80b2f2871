use std::process::ExitCode;

use clap::Parser;

use hybridlink_cli::args::Cli;

fn main() -> ExitCode {
    match hybridlink_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
