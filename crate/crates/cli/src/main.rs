mod args;
mod commands;
mod files;
mod output;
mod parse;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Status;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNCONVERGED: u8 = 3;

fn threads() -> Result<Option<usize>, String> {
    match std::env::var("MFK_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("MFK_THREADS must be a positive integer, got '{s}'")),
        },
    }
}

fn run(cli: Cli) -> Result<Status, String> {
    if let Some(n) = threads()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let (command, opts) = args::resolve(cli)?;
    match command {
        Command::Kernel => commands::kernel(&opts),
        Command::Forward => commands::forward(&opts),
        Command::Invert => commands::invert(&opts),
        Command::Expand => commands::expand(&opts),
        Command::Verify => commands::verify(&opts),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(EXIT_VERIFY),
        Ok(Status::Unconverged) => {
            eprintln!("mfk: warning: some integrals did not reach the requested tolerance");
            ExitCode::from(EXIT_UNCONVERGED)
        }
        Err(e) => {
            eprintln!("mfk: error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
