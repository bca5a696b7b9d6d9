// SPDX-License-Identifier: MIT OR Apache-2.0

#![forbid(unsafe_code)]

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use seglens_core::ErrorKind;

use crate::args::{Cli, Command};

/// Exit status for a failed run, from the underlying library error if any.
fn exit_status(err: &anyhow::Error) -> u8 {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<seglens_core::Error>())
        .map(seglens_core::Error::kind);
    match kind {
        Some(ErrorKind::Numerical) => 3,
        Some(ErrorKind::Parameters) => 4,
        Some(ErrorKind::Input) | None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Embed(a) => commands::embed(&a),
        Command::Detect(a) => commands::detect(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Pipeline(a) => commands::pipeline(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}
