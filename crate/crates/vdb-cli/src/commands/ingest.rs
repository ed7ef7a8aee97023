use std::path::PathBuf;

use anyhow::Result;
use serde::Serialize;

use crate::emit::{emit_curves, Series};
use crate::scenario::load_samples;

/// Build an empirical input distribution from a sample file (one integer per
/// record, first CSV column).
#[derive(clap::Args)]
pub struct Args {
    /// Word width in bits.
    #[arg(long, default_value_t = 8)]
    width: u8,

    /// Treat samples as signed and map them into offset binary.
    #[arg(long)]
    offset: bool,

    /// Sample file to read.
    path: PathBuf,

    /// Output directory for input_pmf.csv and input_pmf.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize)]
struct Scenario<'a> {
    width: u8,
    offset: bool,
    path: &'a PathBuf,
}

pub fn run(args: &Args) -> Result<()> {
    let loaded = load_samples(&args.path, args.width, args.offset)?;
    let scenario = Scenario {
        width: args.width,
        offset: args.offset,
        path: &args.path,
    };
    let series = [Series::from_values("pmf", loaded.distribution.pmf())];
    let (csv, _) = emit_curves(&args.out, "input_pmf", &scenario, &series)?;
    println!(
        "ingest: kept {} of {} records ({} out of range), wrote {}",
        loaded.total - loaded.rejected,
        loaded.total,
        loaded.rejected,
        csv.display()
    );
    Ok(())
}
