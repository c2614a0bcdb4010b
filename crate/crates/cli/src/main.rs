//! `gkcs`: command-line front end for the moment, weight and coherent-state
//! routines of `gkcs-core`.
//!
//! Exit status is 0 on success, 1 on usage or domain errors and 2 when a
//! `verify` run exceeds its tolerance.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(&cli) {
        Ok(commands::Status::Success) => ExitCode::SUCCESS,
        Ok(commands::Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("gkcs: {e}");
            ExitCode::from(1)
        }
    }
}
