//! `vdb`: distortion analysis and channel adaptation for low-voltage serial
//! links. Every subcommand writes plot-ready CSV/JSON artifacts annotated
//! with the resolved scenario; stochastic runs require an explicit seed and
//! reproduce byte-identically.

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

mod commands;
mod emit;
mod scenario;

use commands::{distortion, fsm_trace, i2c_sweep, ingest, optimize, power_sweep};

/// A search that found no candidate satisfying the constraint. Separated
/// from validation errors so callers can tell "you asked for the
/// impossible" (exit 2) from "the request was malformed" (exit 1).
#[derive(Debug)]
pub struct Infeasible;

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no candidate satisfies the constraint")
    }
}

impl std::error::Error for Infeasible {}

#[derive(Parser)]
#[command(name = "vdb", version, about = "Value-deviation-bounded link toolkit")]
enum Cli {
    Distortion(distortion::Args),
    Optimize(optimize::Args),
    I2cSweep(i2c_sweep::Args),
    PowerSweep(power_sweep::Args),
    FsmTrace(fsm_trace::Args),
    Ingest(ingest::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let started = Instant::now();
    let result = match &cli {
        Cli::Distortion(a) => distortion::run(a),
        Cli::Optimize(a) => optimize::run(a),
        Cli::I2cSweep(a) => i2c_sweep::run(a),
        Cli::PowerSweep(a) => power_sweep::run(a),
        Cli::FsmTrace(a) => fsm_trace::run(a),
        Cli::Ingest(a) => ingest::run(a),
    };

    match result {
        Ok(()) => {
            // Wall time goes to the console only; files must be reproducible.
            println!("done in {:.3} s", started.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for infeasible searches and failed parameter estimation, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Infeasible>() {
            return 2;
        }
        if let Some(core) = cause.downcast_ref::<vdb_core::Error>() {
            if matches!(
                core,
                vdb_core::Error::EstimationFailure(_)
                    | vdb_core::Error::InconsistentMeasurements(_)
            ) {
                return 2;
            }
        }
    }
    1
}
