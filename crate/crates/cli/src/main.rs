//! `sinrcap`: generate SINR instances, run the capacity and scheduling
//! algorithms and the exhaustive oracles, verify results, and sweep
//! parameter ranges into CSV.

mod args;
mod commands;
mod sweep;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Input, validation and cap failures.
const EXIT_INVALID: u8 = 2;
/// The spectral oracle could not decide.
const EXIT_INCONCLUSIVE: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    let inconclusive = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<sinrcap::Error>(), Some(sinrcap::Error::OracleInconclusive { .. })));
    if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_INVALID
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        // a second initialisation in the same process is harmless to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
