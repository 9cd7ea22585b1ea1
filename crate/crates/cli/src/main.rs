//! `stdkit` command-line entry point.

mod args;
mod commands;
mod config;
mod exit;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use tracing_subscriber::EnvFilter;

use args::{Cli, Command};
use config::Config;
use exit::CliError;

fn init_tracing() {
    let filter = EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info"));
    tracing_subscriber::fmt()
        .json()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .with_current_span(false)
        .init();
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.trace {
        init_tracing();
    }
    let mut cfg = Config::load(cli.config.as_deref())?;
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    match &cli.command {
        Command::Synth(a) => {
            if let Some(cap) = a.cap {
                cfg.synth_cap_s = cap;
            }
        }
        Command::Detect(a) => commands::apply_window(&mut cfg, &a.window),
        Command::Bench(a) => commands::apply_window(&mut cfg, &a.window),
        _ => {}
    }
    cfg.validate()?;
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::new(exit::FATAL, "internal", e.to_string()))?;
    }
    match &cli.command {
        Command::Synth(a) => commands::synth(a, &cfg),
        Command::Flow(a) => commands::flow(a, &cfg),
        Command::Detect(a) => commands::detect(a, &cfg),
        Command::Eval(a) => commands::eval(a, &cfg),
        Command::Bench(a) => commands::bench(a, &cfg),
        Command::Report(a) => commands::report(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            _ => {
                // clap renders usage text; the diagnostic line comes last
                let rendered = e.render().to_string();
                eprint!("{rendered}");
                let first = rendered.lines().next().unwrap_or("invalid arguments");
                let msg = first.strip_prefix("error: ").unwrap_or(first);
                eprintln!("{}", CliError::usage(msg));
                return ExitCode::from(exit::USAGE as u8);
            }
        },
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code as u8)
        }
    }
}
