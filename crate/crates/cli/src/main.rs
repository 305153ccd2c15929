mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, CliCommand, SUBCOMMANDS};
use commands::UsageError;

const USAGE: u8 = 1;
const DATA: u8 = 2;

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        CliCommand::Evaluate(a) => commands::evaluate(a),
        CliCommand::Topics(a) => commands::topics(a),
        CliCommand::Project(a) => commands::project(a),
        CliCommand::ArousalCurve(a) => commands::arousal(a),
        CliCommand::Synth(a) => commands::synth(a),
        CliCommand::Validate(a) => commands::validate(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let argv = match config::merge_config(std::env::args_os().collect(), SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(DATA);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}\n");
            let _ = Cli::command().print_help();
            ExitCode::from(USAGE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(DATA)
        }
    }
}
