//! Scenario descriptions: what the subcommand flags mirror and what the
//! `--scenario` JSON files contain. Each spec resolves to the corresponding
//! core object, and the resolved scenario is echoed verbatim into every
//! output artifact.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use vdb_core::optimizer::{ConstraintTail, Neighborhood};
use vdb_core::{
    channel_from_profile, estimate_capacitance, estimate_resistances, BenchMeasurements,
    ChannelModel, CircuitParams, DcpProfile, InputDistribution,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Uniform,
    PointMass {
        value: u16,
    },
    Samples {
        path: PathBuf,
        #[serde(default)]
        offset: bool,
    },
}

impl FromStr for InputSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(InputSpec::Uniform);
        }
        if let Some(v) = s.strip_prefix("point:") {
            return Ok(InputSpec::PointMass { value: v.parse()? });
        }
        if let Some(p) = s.strip_prefix("samples:") {
            return Ok(InputSpec::Samples {
                path: p.into(),
                offset: false,
            });
        }
        bail!("input must be uniform, point:<value>, or samples:<path>, got {s:?}")
    }
}

impl InputSpec {
    pub fn with_offset(self, offset: bool) -> Self {
        match self {
            InputSpec::Samples { path, .. } => InputSpec::Samples { path, offset },
            other => other,
        }
    }

    pub fn resolve(&self, width: u8) -> Result<InputDistribution> {
        match self {
            InputSpec::Uniform => Ok(InputDistribution::uniform(width)?),
            InputSpec::PointMass { value } => Ok(InputDistribution::point_mass(width, *value)?),
            InputSpec::Samples { path, offset } => {
                let loaded = load_samples(path, width, *offset)?;
                if loaded.rejected > 0 {
                    eprintln!(
                        "ingest: rejected {} out-of-range records of {}",
                        loaded.rejected, loaded.total
                    );
                }
                Ok(loaded.distribution)
            }
        }
    }
}

pub struct LoadedSamples {
    pub distribution: InputDistribution,
    pub total: usize,
    pub rejected: usize,
}

/// One integer per record, first CSV column, no header row. With `offset`
/// the samples are treated as signed and shifted by 2^(L-1) into offset
/// binary. Unparsable records abort with their line number; out-of-range
/// records are dropped and counted.
pub fn load_samples(path: &Path, width: u8, offset: bool) -> Result<LoadedSamples> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading samples from {}", path.display()))?;
    let shift = if offset { 1i64 << (width - 1) } else { 0 };
    let limit = (1i64 << width) - 1;
    let mut kept = Vec::new();
    let mut total = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.split(',').next().unwrap().trim();
        let raw: i64 = field.parse().map_err(|_| {
            anyhow!(
                "{}: line {}: {field:?} is not an integer",
                path.display(),
                idx + 1
            )
        })?;
        total += 1;
        let value = raw + shift;
        if (0..=limit).contains(&value) {
            kept.push(value as u16);
        }
    }
    if total == 0 {
        bail!("{}: no records", path.display());
    }
    if kept.is_empty() {
        bail!("{}: all {total} records out of range", path.display());
    }
    Ok(LoadedSamples {
        distribution: InputDistribution::empirical(width, &kept)?,
        total,
        rejected: total - kept.len(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Noiseless,
    Symmetric {
        p_down: f64,
        p_up: f64,
    },
    Independent {
        p_down: Vec<f64>,
        p_up: Vec<f64>,
    },
    File {
        path: PathBuf,
    },
    I2c {
        params: ParamsSpec,
        taps: [usize; 8],
        nominal: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_n: Option<f64>,
    },
}

impl FromStr for ChannelSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "noiseless" {
            return Ok(ChannelSpec::Noiseless);
        }
        if let Some(q) = s.strip_prefix("symmetric:") {
            let q: f64 = q.parse()?;
            return Ok(ChannelSpec::Symmetric { p_down: q, p_up: q });
        }
        if let Some(pair) = s.strip_prefix("pair:") {
            let (d, u) = pair
                .split_once(',')
                .ok_or_else(|| anyhow!("pair channel needs p_down,p_up"))?;
            return Ok(ChannelSpec::Symmetric {
                p_down: d.parse()?,
                p_up: u.parse()?,
            });
        }
        if let Some(lists) = s.strip_prefix("independent:") {
            let (d, u) = lists
                .split_once('/')
                .ok_or_else(|| anyhow!("independent channel needs <down list>/<up list>"))?;
            let parse = |part: &str| -> Result<Vec<f64>> {
                part.split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(Into::into))
                    .collect()
            };
            return Ok(ChannelSpec::Independent {
                p_down: parse(d)?,
                p_up: parse(u)?,
            });
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(ChannelSpec::File { path: p.into() });
        }
        if let Some(rest) = s.strip_prefix("i2c:") {
            let (params, sched) = rest
                .split_once(':')
                .ok_or_else(|| anyhow!("i2c channel needs i2c:<params>:<t1,..,t8@nominal>"))?;
            let (taps_str, nominal) = sched
                .split_once('@')
                .ok_or_else(|| anyhow!("i2c schedule needs @<nominal tap>"))?;
            let taps_vec: Vec<usize> = taps_str
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(anyhow::Error::from))
                .collect::<Result<_>>()?;
            let taps: [usize; 8] = taps_vec
                .try_into()
                .map_err(|v: Vec<_>| anyhow!("need exactly 8 taps, got {}", v.len()))?;
            return Ok(ChannelSpec::I2c {
                params: params.parse()?,
                taps,
                nominal: nominal.parse()?,
                sigma_n: None,
            });
        }
        bail!(
            "channel must be noiseless, symmetric:<q>, pair:<d,u>, independent:<down/up>, \
             file:<path>, or i2c:<params>:<taps@nominal>, got {s:?}"
        )
    }
}

impl ChannelSpec {
    pub fn resolve(&self, width: u8) -> Result<ChannelModel> {
        let ch = match self {
            ChannelSpec::Noiseless => ChannelModel::noiseless(width)?,
            ChannelSpec::Symmetric { p_down, p_up } => {
                ChannelModel::symmetric(width, *p_down, *p_up)?
            }
            ChannelSpec::Independent { p_down, p_up } => {
                ChannelModel::word_independent(p_down.clone(), p_up.clone())?
            }
            ChannelSpec::File { path } => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading channel from {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing channel {}", path.display()))?
            }
            ChannelSpec::I2c {
                params,
                taps,
                nominal,
                sigma_n,
            } => {
                let mut params = params.resolve()?;
                if let Some(s) = sigma_n {
                    params.sigma_n = *s;
                    params = params.checked()?;
                }
                let profile = DcpProfile {
                    settings: *taps,
                    nominal: *nominal,
                };
                channel_from_profile(&profile, &params)?
            }
        };
        if ch.width() != width {
            bail!(
                "channel width {} does not match scenario width {width}",
                ch.width()
            );
        }
        Ok(ch)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamsSpec {
    Preset { name: String },
    File { path: PathBuf },
    Bench { path: PathBuf },
}

impl FromStr for ParamsSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("preset:") {
            return Ok(ParamsSpec::Preset { name: name.into() });
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(ParamsSpec::File { path: path.into() });
        }
        if let Some(path) = s.strip_prefix("bench:") {
            return Ok(ParamsSpec::Bench { path: path.into() });
        }
        bail!("circuit parameters must be preset:<name>, file:<path>, or bench:<path>, got {s:?}")
    }
}

impl ParamsSpec {
    pub fn resolve(&self) -> Result<CircuitParams> {
        match self {
            ParamsSpec::Preset { name } => Ok(CircuitParams::preset(name)?),
            ParamsSpec::File { path } => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading circuit parameters from {}", path.display()))?;
                Ok(serde_json::from_str(&text)
                    .with_context(|| format!("parsing circuit parameters {}", path.display()))?)
            }
            ParamsSpec::Bench { path } => {
                let text = fs::read_to_string(path).with_context(|| {
                    format!("reading bench description from {}", path.display())
                })?;
                let bench: BenchSpec = serde_json::from_str(&text)
                    .with_context(|| format!("parsing bench description {}", path.display()))?;
                bench.estimate()
            }
        }
    }
}

/// A bench characterization plus the handful of values the scope cannot
/// see; resolves to full circuit parameters by estimating the resistances
/// from the steady levels and the capacitance from the fast rise time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchSpec {
    pub v_supply: f64,
    pub v_th: f64,
    pub r_on: f64,
    pub sigma_n: f64,
    pub t_clk: f64,
    pub full_scale_ohms: f64,
    pub taps: usize,
    pub measurements: BenchMeasurements,
}

impl BenchSpec {
    pub fn estimate(&self) -> Result<CircuitParams> {
        let m = &self.measurements;
        let (r_ipu, r_off) = estimate_resistances(m, self.v_supply)?;
        let mut params = CircuitParams {
            v_supply: self.v_supply,
            v_th: self.v_th,
            r_ipu: Some(r_ipu),
            r_off,
            r_on: self.r_on,
            c_bus: 1.0,
            sigma_n: self.sigma_n,
            t_clk: self.t_clk,
            dcp_table: vdb_core::i2c::linear_dcp_table(self.full_scale_ohms, self.taps),
        };
        // Borrow a table slot for the measured endpoint resistance; the
        // rise time was taken there, not at a nominal tap.
        params.dcp_table.push(m.r_dcp_min);
        params.c_bus = estimate_capacitance(m.rise_min, &params, params.dcp_table.len() - 1)?;
        params.dcp_table.pop();
        Ok(params.checked()?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSpec {
    Unconstrained,
    File { path: PathBuf },
    Generated { seed: u64 },
}

impl ConstraintSpec {
    pub fn resolve(&self, width: u8) -> Result<ConstraintTail> {
        match self {
            ConstraintSpec::Unconstrained => Ok(ConstraintTail::unconstrained(width)?),
            ConstraintSpec::File { path } => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading constraint from {}", path.display()))?;
                let t: ConstraintTail = serde_json::from_str(&text)
                    .with_context(|| format!("parsing constraint {}", path.display()))?;
                if t.width() != width {
                    bail!(
                        "constraint width {} does not match scenario width {width}",
                        t.width()
                    );
                }
                Ok(t)
            }
            ConstraintSpec::Generated { seed } => {
                Ok(vdb_core::optimizer::generate_random_constraint(width, *seed)?.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchSpec {
    BitIndependent { resolution_log2: u8 },
    BitLevel { symmetric_neighborhood: bool },
}

impl SearchSpec {
    pub fn neighborhood(self) -> Option<Neighborhood> {
        match self {
            SearchSpec::BitIndependent { .. } => None,
            SearchSpec::BitLevel {
                symmetric_neighborhood: true,
            } => Some(Neighborhood::Symmetric),
            SearchSpec::BitLevel {
                symmetric_neighborhood: false,
            } => Some(Neighborhood::NonNegative),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonteCarloSpec {
    pub samples: u64,
    pub seed: u64,
}

pub fn read_scenario<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading scenario from {}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing scenario {}", path.display()))?;
    // Emitted mirrors wrap the scenario in a `scenario` key; accept them
    // whole so a run can be replayed by pointing at the file it produced.
    if let Some(inner) = value.get_mut("scenario") {
        value = inner.take();
    }
    serde_json::from_value(value).with_context(|| format!("parsing scenario {}", path.display()))
}
