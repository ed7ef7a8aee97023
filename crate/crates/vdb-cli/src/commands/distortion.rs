use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use vdb_core::monte_carlo_distortion;

use crate::emit::{emit_curves, Series};
use crate::scenario::{read_scenario, ChannelSpec, InputSpec, MonteCarloSpec};

/// Distortion distribution of a channel under an input: PMF and tail, with
/// an optional seeded Monte Carlo replay alongside.
#[derive(clap::Args)]
pub struct Args {
    /// Scenario JSON file; replaces the individual scenario flags.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Word width in bits.
    #[arg(long, default_value_t = 8)]
    width: u8,

    /// Input distribution: uniform, point:<value>, or samples:<path>.
    #[arg(long, default_value = "uniform", value_parser = InputSpec::from_str)]
    input: InputSpec,

    /// Treat sample files as signed and map them into offset binary.
    #[arg(long)]
    offset: bool,

    /// Channel: noiseless, symmetric:<q>, pair:<d,u>, independent:<down/up>,
    /// file:<path>, or i2c:<params>:<t1,..,t8@nominal>.
    #[arg(long, default_value = "noiseless", value_parser = ChannelSpec::from_str)]
    channel: ChannelSpec,

    /// Override the noise level of an i2c channel, in volts.
    #[arg(long)]
    sigma: Option<f64>,

    /// Also run this many Monte Carlo samples (requires --seed).
    #[arg(long)]
    monte_carlo: Option<u64>,

    /// Seed for the Monte Carlo run.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for distortion.csv and distortion.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
pub struct Scenario {
    pub width: u8,
    pub input: InputSpec,
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSpec>,
}

impl Args {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            return read_scenario(path);
        }
        let monte_carlo = match (self.monte_carlo, self.seed) {
            (None, _) => None,
            (Some(samples), Some(seed)) => Some(MonteCarloSpec { samples, seed }),
            (Some(_), None) => bail!("--monte-carlo is stochastic and requires --seed"),
        };
        let mut channel = self.channel.clone();
        if let ChannelSpec::I2c { sigma_n, .. } = &mut channel {
            *sigma_n = self.sigma.or(*sigma_n);
        }
        Ok(Scenario {
            width: self.width,
            input: self.input.clone().with_offset(self.offset),
            channel,
            monte_carlo,
        })
    }
}

pub fn run(args: &Args) -> Result<()> {
    let scenario = args.scenario()?;
    let input = scenario.input.resolve(scenario.width)?;
    let channel = scenario.channel.resolve(scenario.width)?;
    let d = super::distortion_of(&channel, &input)?;

    let mut series = vec![
        Series::from_values("pmf", d.pmf()),
        Series::from_values("tail", d.tail()),
    ];
    if let Some(mc) = &scenario.monte_carlo {
        let est = monte_carlo_distortion(&channel, &input, mc.samples, mc.seed)?;
        series.push(Series::from_values("mc_pmf", est.pmf()));
        series.push(Series::from_values("mc_tail", est.tail()));
    }

    let (csv, _) = emit_curves(&args.out, "distortion", &scenario, &series)?;
    println!(
        "distortion: width {}, T(0) = {:.6}, wrote {}",
        scenario.width,
        d.tail_at(0),
        csv.display()
    );
    Ok(())
}
