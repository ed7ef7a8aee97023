use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use vdb_core::{channel_from_profile, DcpProfile};

use crate::emit::{emit_curves, Series};
use crate::scenario::{read_scenario, InputSpec, ParamsSpec};

const WIDTH: u8 = 8;

/// Distortion tails of the byte channel at a range of fixed pull-up
/// settings, one series per tap, plus the all-errors reference line.
#[derive(clap::Args)]
pub struct Args {
    /// Scenario JSON file; replaces the individual scenario flags.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Circuit parameters: preset:<name> or file:<path>.
    #[arg(long, default_value = "preset:warp-100k", value_parser = ParamsSpec::from_str)]
    params: ParamsSpec,

    /// Taps to sweep, as a comma list of values and ranges (e.g. 8-12,14).
    #[arg(long, default_value = "8-12")]
    taps: String,

    /// Tap used outside the data slots (idle, ACK, START/STOP).
    #[arg(long, default_value_t = 0)]
    nominal: usize,

    /// Override the noise level, in volts.
    #[arg(long)]
    sigma: Option<f64>,

    /// Input distribution: uniform, point:<value>, or samples:<path>.
    #[arg(long, default_value = "uniform", value_parser = InputSpec::from_str)]
    input: InputSpec,

    /// Treat sample files as signed and map them into offset binary.
    #[arg(long)]
    offset: bool,

    /// Drop the worst-case reference series from the output.
    #[arg(long)]
    no_worst_line: bool,

    /// Output directory for i2c_tails.csv and i2c_tails.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
pub struct Scenario {
    pub params: ParamsSpec,
    pub taps: Vec<usize>,
    pub nominal: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub input: InputSpec,
    pub worst_line: bool,
}

impl Args {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            return read_scenario(path);
        }
        Ok(Scenario {
            params: self.params.clone(),
            taps: super::parse_taps(&self.taps)?,
            nominal: self.nominal,
            sigma: self.sigma,
            input: self.input.clone().with_offset(self.offset),
            worst_line: !self.no_worst_line,
        })
    }
}

pub fn run(args: &Args) -> Result<()> {
    let scenario = args.scenario()?;
    let mut params = scenario.params.resolve()?;
    if let Some(s) = scenario.sigma {
        params.sigma_n = s;
        params = params.checked()?;
    }
    let input = scenario.input.resolve(WIDTH)?;

    let mut series = Vec::with_capacity(scenario.taps.len() + 1);
    for &tap in &scenario.taps {
        let profile = DcpProfile::uniform(tap, scenario.nominal);
        let channel = channel_from_profile(&profile, &params)?;
        let d = super::distortion_of(&channel, &input)?;
        series.push(Series::from_values(&format!("tap-{tap}"), d.tail()));
    }
    if scenario.worst_line {
        let n = 1usize << WIDTH;
        let worst: Vec<f64> = (0..n).map(|m| (n - 1 - m) as f64 / n as f64).collect();
        series.push(Series::from_values("worst-case", &worst));
    }

    let (csv, _) = emit_curves(&args.out, "i2c_tails", &scenario, &series)?;
    println!(
        "i2c-sweep: {} taps, sigma {} V, r_off {:.1} ohm, c_bus {:.3e} F, wrote {}",
        scenario.taps.len(),
        params.sigma_n,
        params.r_off,
        params.c_bus,
        csv.display()
    );
    Ok(())
}
