use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use vdb_core::power_estimate;

use crate::emit::{emit_curves, Series};
use crate::scenario::{read_scenario, ParamsSpec};

/// Average supply power across a range of pull-up settings.
#[derive(clap::Args)]
pub struct Args {
    /// Scenario JSON file; replaces the individual scenario flags.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Circuit parameters: preset:<name> or file:<path>.
    #[arg(long, default_value = "preset:warp-100k", value_parser = ParamsSpec::from_str)]
    params: ParamsSpec,

    /// Taps to sweep, as a comma list of values and ranges.
    #[arg(long, default_value = "0-255")]
    taps: String,

    /// Fraction of bit cycles with the bus held low.
    #[arg(long, default_value_t = 0.5)]
    duty0: f64,

    /// Bus transition rate in Hz.
    #[arg(long, default_value_t = 100_000.0)]
    f_switch: f64,

    /// Output directory for power_curve.csv and power_curve.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
pub struct Scenario {
    pub params: ParamsSpec,
    pub taps: Vec<usize>,
    pub duty0: f64,
    pub f_switch: f64,
}

impl Args {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            return read_scenario(path);
        }
        Ok(Scenario {
            params: self.params.clone(),
            taps: super::parse_taps(&self.taps)?,
            duty0: self.duty0,
            f_switch: self.f_switch,
        })
    }
}

pub fn run(args: &Args) -> Result<()> {
    let scenario = args.scenario()?;
    let params = scenario.params.resolve()?;

    let mut points = Vec::with_capacity(scenario.taps.len());
    for &tap in &scenario.taps {
        let watts = power_estimate(&params, tap, scenario.duty0, scenario.f_switch)?;
        points.push((tap as u64, watts));
    }
    let series = [Series {
        name: "power".into(),
        points,
    }];

    let (csv, _) = emit_curves(&args.out, "power_curve", &scenario, &series)?;
    println!(
        "power-sweep: {} taps, duty0 {}, f_switch {} Hz, wrote {}",
        scenario.taps.len(),
        scenario.duty0,
        scenario.f_switch,
        csv.display()
    );
    Ok(())
}
