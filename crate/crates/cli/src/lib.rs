//! Batch verification sweeps over the realizations and measures of the
//! `suq11` library, with deterministic JSON or CSV reports.
//!
//! Subcommands:
//!
//! * `verify-algebra`: defining relations and Casimir spread for every
//!   realization on the (kind, q, k₀, l) grid.
//! * `verify-unity`: resolution of unity per measure, adjudicating the
//!   lattice convention where it is not fixed in advance.
//! * `casimir-table`: Casimir values per parity sector against closed forms.
//!
//! Exit status is 0 when every case passes, 1 when any case fails (or an
//! open finding is not acknowledged), 2 on usage or configuration errors.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod sweep;

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{Format, KindSet, OutputOptions, SweepArgs, SweepConfig};
use report::{write_atomic, Report, WallTime};
use sweep::{
    algebra_record, casimir_cases, casimir_record, measure_cases, realization_cases, run_cases,
    unity_record,
};

pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "suq11",
    version,
    about = "Verification sweeps for q-deformed su(1,1) realizations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check [Q₀,Q±] = ±Q±, [Q₊,Q₋] = -[2Q₀] and Casimir constancy.
    VerifyAlgebra(SweepArgs),
    /// Check ⟨n|I|n⟩ = 1 for n ≤ nmax per measure.
    VerifyUnity(SweepArgs),
    /// Tabulate Casimir values and spreads.
    CasimirTable(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra(_) => "verify-algebra",
            Command::VerifyUnity(_) => "verify-unity",
            Command::CasimirTable(_) => "casimir-table",
        }
    }

    fn args(&self) -> &SweepArgs {
        match self {
            Command::VerifyAlgebra(a) | Command::VerifyUnity(a) | Command::CasimirTable(a) => a,
        }
    }

    fn kind_set(&self) -> KindSet {
        match self {
            Command::VerifyUnity(_) => KindSet::Measures,
            _ => KindSet::Realizations,
        }
    }
}

/// Run a parsed command and build its report.
pub fn execute(command: &Command) -> Result<(Report, OutputOptions), CliError> {
    let (cfg, out) = SweepConfig::resolve(command.args(), command.kind_set())?;
    let start = Instant::now();
    let results = match command {
        Command::VerifyAlgebra(_) => run_cases(&realization_cases(&cfg), &cfg, algebra_record),
        Command::VerifyUnity(_) => run_cases(&measure_cases(&cfg), &cfg, unity_record),
        Command::CasimirTable(_) => run_cases(&casimir_cases(&cfg), &cfg, casimir_record),
    };
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let (records, cases_ms): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let timing = out.timing.then_some(WallTime { total_ms, cases_ms });
    Ok((Report::new(command.name(), cfg, records, timing), out))
}

fn render(report: &Report) -> Result<String, CliError> {
    match report.config.format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv(),
    }
}

/// Parse-free entry point used by the binary; returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let outcome = execute(&cli.command).and_then(|(report, out)| {
        let text = render(&report)?;
        match &out.out {
            Some(path) => write_atomic(path, text.as_bytes())?,
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?,
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            let s = &report.summary;
            eprintln!(
                "{}: {} cases, {} passed, {} failed, {} unsupported, {} open findings",
                report.command, s.total, s.passed, s.failed, s.unsupported, s.open_findings
            );
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Config(_) => EXIT_USAGE,
                _ => 1,
            }
        }
    }
}
