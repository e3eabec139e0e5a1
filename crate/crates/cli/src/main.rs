mod args;
mod commands;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Context;
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        verbose: cli.verbose,
    };
    let workers = cli.workers.map(|w| w as usize);
    let outcome = qwalk_core::ensemble::with_workers(workers, || commands::run(cli.command, &ctx))
        .map_err(CliError::from)
        .and_then(|r| r);
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
