use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::word::Word;

/// Bits per transmitted byte; the bus model is byte-oriented.
pub const PROFILE_LEN: usize = 8;

/// A 10% to 90% swing of a single exponential spans ln 9 time constants.
const LN_9: f64 = 2.1972245773362196;

/// Parallel resistance, with zero and infinity behaving as the circuit
/// limits suggest: a short stays a short, an absent branch drops out.
pub fn parallel(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return b;
    }
    if b.is_infinite() {
        return a;
    }
    a * b / (a + b)
}

/// Uniformly spaced digitally controlled potentiometer taps: tap `i` of
/// `taps` steps to `i/taps` of the full-scale resistance, tap 0 being a
/// straight wire.
pub fn linear_dcp_table(full_scale_ohms: f64, taps: usize) -> Vec<f64> {
    (0..taps)
        .map(|i| i as f64 * full_scale_ohms / taps as f64)
        .collect()
}

/// Electrical description of one I2C bus: supply and threshold, the three
/// equivalent resistances around the data line, bus capacitance, Gaussian
/// sampling noise, clock period, and the resistance table of the adjustable
/// pull-up.
///
/// `r_ipu` is the combined internal pull-up of every device on the bus;
/// `None` means no internal pull-up paths (an open branch). Fields are
/// public for construction convenience; anything arriving through serde is
/// validated, hand-built values should go through [`CircuitParams::checked`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr")]
pub struct CircuitParams {
    pub v_supply: f64,
    pub v_th: f64,
    pub r_ipu: Option<f64>,
    pub r_off: f64,
    pub r_on: f64,
    pub c_bus: f64,
    pub sigma_n: f64,
    pub t_clk: f64,
    pub dcp_table: Vec<f64>,
}

#[derive(Deserialize)]
struct ParamsRepr {
    v_supply: f64,
    v_th: f64,
    #[serde(default)]
    r_ipu: Option<f64>,
    r_off: f64,
    r_on: f64,
    c_bus: f64,
    sigma_n: f64,
    t_clk: f64,
    dcp_table: Vec<f64>,
}

impl TryFrom<ParamsRepr> for CircuitParams {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        CircuitParams {
            v_supply: r.v_supply,
            v_th: r.v_th,
            r_ipu: r.r_ipu,
            r_off: r.r_off,
            r_on: r.r_on,
            c_bus: r.c_bus,
            sigma_n: r.sigma_n,
            t_clk: r.t_clk,
            dcp_table: r.dcp_table,
        }
        .checked()
    }
}

impl CircuitParams {
    pub fn checked(self) -> Result<Self> {
        let pos = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be positive, got {v}")))
            }
        };
        pos(self.v_supply, "supply voltage")?;
        if !self.v_th.is_finite() || self.v_th <= 0.0 || self.v_th >= self.v_supply {
            return Err(Error::InvalidArgument(format!(
                "threshold {} must lie strictly inside (0, supply)",
                self.v_th
            )));
        }
        if let Some(r) = self.r_ipu {
            pos(r, "internal pull-up resistance")?;
        }
        pos(self.r_off, "off resistance")?;
        pos(self.r_on, "on resistance")?;
        pos(self.c_bus, "bus capacitance")?;
        pos(self.sigma_n, "noise level")?;
        pos(self.t_clk, "clock period")?;
        if self.dcp_table.is_empty() {
            return Err(Error::InvalidArgument("DCP table is empty".into()));
        }
        if let Some(&r) = self
            .dcp_table
            .iter()
            .find(|r| !r.is_finite() || **r < 0.0)
        {
            return Err(Error::InvalidArgument(format!(
                "DCP table entry {r} must be finite and non-negative"
            )));
        }
        Ok(self)
    }

    /// External pull-up resistance at a DCP setting.
    pub fn r_dcp(&self, setting: usize) -> Result<f64> {
        self.dcp_table.get(setting).copied().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "DCP setting {setting} outside table of {} taps",
                self.dcp_table.len()
            ))
        })
    }

    /// Total pull-up: internal paths in parallel with the DCP tap.
    pub fn r_pu_eq(&self, setting: usize) -> Result<f64> {
        let r_dcp = self.r_dcp(setting)?;
        Ok(parallel(self.r_ipu.unwrap_or(f64::INFINITY), r_dcp))
    }

    /// The evaluation-board bus with the 100 kOhm, 256-tap DCP: 2.5 V
    /// supply, mid-rail threshold, pull-down path as estimated from the
    /// bench, 100 pF bus (few devices attached), 20 mV noise, 5 us clock,
    /// no internal pull-ups.
    pub fn warp_100k() -> Self {
        CircuitParams {
            v_supply: 2.5,
            v_th: 1.25,
            r_ipu: None,
            r_off: 3934.6,
            r_on: 15.0,
            c_bus: 100e-12,
            sigma_n: 0.02,
            t_clk: 5e-6,
            dcp_table: linear_dcp_table(100_000.0, 256),
        }
    }

    /// Same bus with the pin-compatible 10 kOhm part: ten times finer taps.
    pub fn warp_10k() -> Self {
        CircuitParams {
            dcp_table: linear_dcp_table(10_000.0, 256),
            ..Self::warp_100k()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "warp-100k" => Ok(Self::warp_100k()),
            "warp-10k" => Ok(Self::warp_10k()),
            _ => Err(Error::InvalidArgument(format!(
                "unknown circuit preset {name:?}, available: warp-100k, warp-10k"
            ))),
        }
    }
}

/// Pull-up schedule for one byte: `settings[j]` drives bit slot `j+1` in
/// transmission order, `nominal` covers everything else (idle, ACK,
/// START/STOP).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcpProfile {
    pub settings: [usize; PROFILE_LEN],
    pub nominal: usize,
}

impl DcpProfile {
    /// The same tap for all eight bit slots.
    pub fn uniform(setting: usize, nominal: usize) -> Self {
        DcpProfile {
            settings: [setting; PROFILE_LEN],
            nominal,
        }
    }

    pub fn validate_against(&self, params: &CircuitParams) -> Result<()> {
        for &s in self.settings.iter().chain([&self.nominal]) {
            params.r_dcp(s)?;
        }
        Ok(())
    }
}

/// Bench characterization of the two extreme DCP configurations: steady
/// logic levels, 10-90% transition times, and the endpoint resistances.
/// Voltages in volts, times in seconds, resistances in ohms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchMeasurements {
    pub v0_min: f64,
    pub v1_min: f64,
    pub v0_max: f64,
    pub v1_max: f64,
    pub rise_min: f64,
    pub rise_max: f64,
    pub fall_min: f64,
    pub fall_max: f64,
    pub r_dcp_min: f64,
    pub r_dcp_max: f64,
}

impl BenchMeasurements {
    /// The evaluation-board bench numbers (means of the scope statistics).
    pub fn warp_bench() -> Self {
        BenchMeasurements {
            v0_min: 0.0589,
            v1_min: 2.1316,
            v0_max: 0.0252,
            v1_max: 2.0723,
            rise_min: 454e-9,
            rise_max: 1092e-9,
            fall_min: 18e-9,
            fall_max: 17e-9,
            r_dcp_min: 3920.0,
            r_dcp_max: 62750.0,
        }
    }
}

/// Ratio of the equivalent pull-up resistances at the two DCP extremes, as
/// implied by the steady logic-1 levels: each level fixes r_pu_eq/r_off, so
/// dividing the two relations cancels the unknown r_off.
pub fn measured_pull_up_ratio(m: &BenchMeasurements, v_supply: f64) -> f64 {
    ((v_supply - m.v1_max) / m.v1_max) * (m.v1_min / (v_supply - m.v1_min))
}

const R_IPU_BRACKET_HIGH: f64 = 1e7;

/// Recover the internal pull-up and the pull-down off-resistance from the
/// bench levels. The pull-up ratio is strictly increasing in r_ipu, from 1
/// (stiff internal pull-up dominates both extremes) toward
/// r_dcp_max/r_dcp_min (no internal pull-up), so the root is bracketed and
/// bisection converges; r_off then follows from the min-setting divider.
pub fn estimate_resistances(m: &BenchMeasurements, v_supply: f64) -> Result<(f64, f64)> {
    if m.v1_min <= 0.0 || m.v1_min >= v_supply || m.v1_max <= 0.0 || m.v1_max >= v_supply {
        return Err(Error::InconsistentMeasurements(format!(
            "logic-1 levels {} / {} outside (0, supply)",
            m.v1_min, m.v1_max
        )));
    }
    let rho = measured_pull_up_ratio(m, v_supply);
    if m.r_dcp_max > m.r_dcp_min && rho <= 1.0 {
        return Err(Error::InconsistentMeasurements(format!(
            "pull-up ratio {rho} not above 1: logic-1 level must drop as pull-up grows"
        )));
    }
    let ratio_at = |r_ipu: f64| parallel(r_ipu, m.r_dcp_max) / parallel(r_ipu, m.r_dcp_min);
    let mut lo = 1e-6;
    let mut hi = R_IPU_BRACKET_HIGH;
    if ratio_at(lo) > rho || ratio_at(hi) < rho {
        return Err(Error::EstimationFailure(format!(
            "no internal pull-up in (0, {R_IPU_BRACKET_HIGH:.0}] ohms reproduces ratio {rho}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio_at(mid) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_ipu = 0.5 * (lo + hi);
    let r_pu_min = parallel(r_ipu, m.r_dcp_min);
    let r_off = r_pu_min * m.v1_min / (v_supply - m.v1_min);
    Ok((r_ipu, r_off))
}

/// Bus capacitance from a 10-90% rise time at the given DCP setting.
/// The charging resistance is the pull-down off-path in parallel with the
/// full pull-up.
pub fn estimate_capacitance(
    rise_time: f64,
    params: &CircuitParams,
    setting: usize,
) -> Result<f64> {
    if !(rise_time > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rise time must be positive, got {rise_time}"
        )));
    }
    let r_parallel = parallel(params.r_off, params.r_pu_eq(setting)?);
    Ok(rise_time / (LN_9 * r_parallel))
}

/// Steady logic levels at one DCP setting, from the two voltage dividers
/// around the data line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub v0: f64,
    pub v1: f64,
}

pub fn steady_state_levels(params: &CircuitParams, setting: usize) -> Result<SteadyState> {
    let r_pu = params.r_pu_eq(setting)?;
    Ok(SteadyState {
        v0: params.v_supply * params.r_on / (params.r_on + r_pu),
        v1: params.v_supply * params.r_off / (params.r_off + r_pu),
    })
}

/// Probability mass of a Gaussian with the given mean below the threshold.
fn gaussian_below(threshold: f64, mean: f64, sigma: f64) -> f64 {
    (0.5 * libm::erfc((mean - threshold) / (sigma * std::f64::consts::SQRT_2))).clamp(0.0, 1.0)
}

/// Per-bit probabilities of reading a transmitted 1 as 0 for one byte under
/// a pull-up schedule.
///
/// The byte goes out most significant bit first, starting from the nominal
/// logic-0 level (an ACK precedes every byte). A 0 slot snaps to that
/// setting's steady low level within the cycle; a 1 slot charges
/// exponentially toward the setting's steady high level and is sampled at
/// the cycle end against the threshold with Gaussian noise. Entries are
/// indexed by bit position; 0 slots keep probability zero. Upward flips do
/// not occur: raising the pull-up only weakens logic 1.
pub fn byte_error_profile(
    x: Word,
    profile: &DcpProfile,
    params: &CircuitParams,
) -> Result<[f64; PROFILE_LEN]> {
    if x.width() as usize != PROFILE_LEN {
        return Err(Error::WidthMismatch {
            expected: PROFILE_LEN as u8,
            actual: x.width(),
        });
    }
    profile.validate_against(params)?;
    let mut v = steady_state_levels(params, profile.nominal)?.v0;
    let mut p_down = [0.0; PROFILE_LEN];
    for (slot, &setting) in profile.settings.iter().enumerate() {
        let bit = PROFILE_LEN - 1 - slot; // MSB rides the first slot
        let levels = steady_state_levels(params, setting)?;
        if x.bit(bit as u8) {
            let tau = parallel(params.r_off, params.r_pu_eq(setting)?) * params.c_bus;
            let decay = if tau > 0.0 {
                (-params.t_clk / tau).exp()
            } else {
                0.0
            };
            v = v * decay + levels.v1 * (1.0 - decay);
            p_down[bit] = gaussian_below(params.v_th, v, params.sigma_n);
        } else {
            v = levels.v0;
        }
    }
    Ok(p_down)
}

/// Tabulate [`byte_error_profile`] over all 256 bytes into a word-dependent
/// channel (upward probabilities identically zero).
pub fn channel_from_profile(profile: &DcpProfile, params: &CircuitParams) -> Result<ChannelModel> {
    profile.validate_against(params)?;
    let n = 1usize << PROFILE_LEN;
    let mut p_down = Vec::with_capacity(n);
    for x in 0..n as u16 {
        let row = byte_error_profile(Word::new(x, PROFILE_LEN as u8)?, profile, params)?;
        p_down.push(row.to_vec());
    }
    let p_up = vec![vec![0.0; PROFILE_LEN]; n];
    ChannelModel::word_dependent(p_down, p_up)
}

/// First-order bus power at one DCP setting: conduction while the line is
/// held low for `duty0` of the time, plus switching loss at `f_switch`
/// full-swing transitions per second. The conduction term is
/// `duty0 * v_supply * (v_supply - v0) / r_pu_eq` rewritten through the v0
/// divider, which keeps it finite for a stiff pull-up.
pub fn power_estimate(
    params: &CircuitParams,
    setting: usize,
    duty0: f64,
    f_switch: f64,
) -> Result<f64> {
    if !duty0.is_finite() || !(0.0..=1.0).contains(&duty0) {
        return Err(Error::InvalidArgument(format!(
            "low duty cycle {duty0} outside [0, 1]"
        )));
    }
    if !f_switch.is_finite() || f_switch < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "switching rate {f_switch} must be non-negative"
        )));
    }
    let r_pu = params.r_pu_eq(setting)?;
    let vs = params.v_supply;
    Ok(duty0 * vs * vs / (params.r_on + r_pu) + f_switch * params.c_bus * vs * vs)
}
