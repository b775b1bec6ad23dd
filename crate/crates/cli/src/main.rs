// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod defaults;
mod rational;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, EconomyCommand, FuzzyCommand, Format, GameCommand, OracleCommand, PreferenceCommand};
use commands::{InputError, Output};

const EXIT_INVALID: u8 = 3;

fn run(cli: Cli) -> Result<Output, InputError> {
    let tol = cli.global.tol;
    match cli.command {
        Command::Fuzzy(FuzzyCommand::Inspect { file }) => commands::fuzzy_inspect(&file, tol),
        Command::Preference(PreferenceCommand::Check { file }) => commands::preference_check(&file, tol),
        Command::Game(GameCommand::Solve { file }) => commands::game_solve(&file, tol),
        Command::Economy(EconomyCommand::Solve { file, method, max_iter, seed }) => {
            commands::economy_solve(&file, tol, method, max_iter, seed)
        }
        Command::Economy(EconomyCommand::Verify { file, price, alloc }) => {
            commands::economy_verify(&file, tol, &price.0, &alloc)
        }
        Command::Oracle(OracleCommand::Demand { file, resolution, price, bounds }) => {
            commands::oracle_demand(&file, resolution, &price.0, bounds.map(|b| b.0))
        }
        Command::Oracle(OracleCommand::Equilibrium { file, resolution }) => {
            commands::oracle_equilibrium(&file, resolution)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID),
            };
        }
    };
    let format = cli.global.format;
    let output_path = cli.global.output.clone();
    let out = match run(cli) {
        Ok(out) => out,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if let Some(path) = output_path {
        if let Err(e) = fs::write(&path, &out.json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let shown = match format {
        Format::Text => &out.text,
        Format::Json => &out.json,
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(shown.as_bytes());
    ExitCode::from(out.exit)
}
