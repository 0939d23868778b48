//! `lagt`: forward and inverse Laguerre transforms of signal files, and
//! benchmark tables on built-in fixtures.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or malformed input, 3 numeric guard.

mod args;
mod bench;
mod failure;
mod formats;
mod forward;
mod inverse;
mod provenance;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use failure::Failure;

/// Cap rayon's pool at `LAGT_THREADS` when it is set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("LAGT_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("LAGT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot start {threads} worker threads: {e}")))
}

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
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Forward(a) => forward::run(a),
        Command::Inverse(a) => inverse::run(a),
        Command::Bench(a) => bench::run(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
