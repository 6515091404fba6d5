use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gridcs::cli::{self, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(parsed) => {
            env_logger::init();
            cli::configure_threads(parsed.threads);
            match cli::run(parsed.command) {
                Ok(()) => ExitCode::SUCCESS,
                Err(err) => err.report(),
            }
        }
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            ExitCode::from(code)
        }
    }
}
