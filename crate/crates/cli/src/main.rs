mod cli;
mod commands;
mod config;
mod inputs;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use deadend::group::json::{canonical_pretty, digest, SCHEMA};
use deadend::Error;

use crate::cli::{Cli, Command};
use crate::commands::Outcome;
use crate::inputs::{ConstructionInputs, Setup};

const EXIT_OTHER: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::BudgetExhausted { .. } => EXIT_BUDGET,
                Error::Verification(_) | Error::Certificate { .. } => EXIT_VERIFICATION,
                Error::Io(_) | Error::Overflow { .. } | Error::Cache(_) | Error::Csv(_) => EXIT_OTHER,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_OTHER
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Construct(args) => {
            let setup = Setup::from_args(&args.common)?;
            let inputs = ConstructionInputs::from_args(&args.construction)?;
            commands::construct(&setup, &inputs)
        }
        Command::Verify(args) => commands::verify(args),
        Command::Certify(args) => commands::certify(args),
        Command::Depth(args) => commands::depth_one(args),
        Command::Profile(args) => commands::profile(args),
        Command::Ball(args) => commands::ball(args),
        Command::Diameter(args) => commands::diameter_of(args),
    }
}

fn report(command: &str, inputs: Value, results: Value, passed: bool, started: Instant) -> Result<String> {
    let inputs_digest = digest(&json!({ "command": command, "inputs": inputs }))?;
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "inputs_digest": inputs_digest,
        "results": results,
        "passed": passed,
        "timing": { "elapsed_seconds": started.elapsed().as_secs_f64() },
    });
    Ok(canonical_pretty(&doc)?)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.command.common().out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            if let Err(e) = writeln!(io::stdout().lock(), "{text}") {
                // a closed pipe downstream is not our failure
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(Error::Io(e).into());
                }
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli, argv: &[String]) -> Result<u8> {
    let started = Instant::now();
    let name = cli.command.name();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            emit(cli, &report(name, outcome.inputs, outcome.results, true, started)?)?;
            Ok(0)
        }
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            if code == EXIT_BUDGET || code == EXIT_VERIFICATION {
                let results = json!({ "error": format!("{err:#}") });
                emit(cli, &report(name, json!({ "argv": argv }), results, false, started)?)?;
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let args = match config::merge_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(exit_code(&err).max(EXIT_INPUT));
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli, &args[1..]) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
