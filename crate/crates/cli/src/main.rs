//! `emcavity`: heat-kernel coefficients, ball spectra, trace fits and
//! regularized mode sums from the command line.
//!
//! Subcommands exchange files. Every run writes `manifest.json` into its
//! output directory and embeds the reproducible part of it in each JSON
//! result.

mod args;
mod commands;
mod error;
mod inputs;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(a) => commands::coeffs(&a),
        Command::Modes(a) => commands::modes(&a),
        Command::Trace(a) => commands::trace(&a),
        Command::Fit(a) => commands::fit(&a),
        Command::Casimir(a) => commands::casimir(&a),
        Command::Verify(a) => commands::verify(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
