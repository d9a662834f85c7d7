//! `chi2refine`: batch front end for the refined chi-square approximations.

mod cli;
mod commands;
mod error;
mod grid;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use chi2refine_core::SeriesControl;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;
use crate::output::Table;

const THREADS_VAR: &str = "CHI2REFINE_THREADS";

fn series_control(cli: &Cli) -> Result<SeriesControl, CliError> {
    let d = SeriesControl::default();
    SeriesControl::new(cli.common.rel_tol.unwrap_or(d.rel_tol), cli.common.max_terms.unwrap_or(d.max_terms))
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

fn execute(cli: &Cli) -> Result<Table, CliError> {
    let ctl = series_control(cli)?;
    thread_pool()?.install(|| match &cli.command {
        Command::Survival(a) => commands::survival(a, &ctl),
        Command::Scan(a) => commands::scan(a, &ctl),
        Command::Constants(a) => commands::constants(a),
        Command::Median(a) => commands::median(a, &ctl),
        Command::Detect(a) => commands::detect(a, &ctl),
        Command::Llt(a) => commands::llt(a, &ctl),
        Command::Metrics(a) => commands::metrics(a, &ctl),
        Command::Moments(a) => commands::moments(a),
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let table = execute(cli)?;
    match &cli.common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(cli.common.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(cli.common.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
