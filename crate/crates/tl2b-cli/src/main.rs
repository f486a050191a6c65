//! Batch front end: runs the audits of the kernel and writes versioned reports.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = commands::run(&cfg);
    let (report, code) = match &result {
        Ok(outcome) => (output::report(&cfg, outcome), if outcome.audit.all_pass() { 0 } else { 1 }),
        Err(e) => (output::error_report(&cfg, e), 2),
    };
    if let Err(e) = output::emit(&cfg, &report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    match &result {
        Ok(outcome) => {
            if let Some(f) = outcome.audit.first_failure() {
                eprintln!("FAIL {} [{}]: {}", f.identity_id, f.reference, f.max_abs_deviation);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code)
}
