pub mod distortion;
pub mod fsm_trace;
pub mod i2c_sweep;
pub mod ingest;
pub mod optimize;
pub mod power_sweep;

use anyhow::Result;
use vdb_core::{
    distortion_pmf_fast, uniform_word_independent_pmf, ChannelModel, DistortionDistribution,
    InputDistribution,
};

/// Route to the cheapest exact path: the closed form under a uniform input
/// and word-independent channel, the per-word convolution otherwise.
pub(crate) fn distortion_of(
    ch: &ChannelModel,
    input: &InputDistribution,
) -> Result<DistortionDistribution> {
    match ch {
        ChannelModel::WordIndependent { p_down, p_up } if input.is_exactly_uniform() => {
            Ok(uniform_word_independent_pmf(p_down, p_up)?)
        }
        _ => Ok(distortion_pmf_fast(ch, input)?),
    }
}

/// Comma-separated setting indices, each token a number or an inclusive
/// `a-b` range: `"8-10,12"` means 8, 9, 10, 12.
pub(crate) fn parse_taps(s: &str) -> Result<Vec<usize>> {
    let mut taps = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if let Some((a, b)) = token.split_once('-') {
            let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
            anyhow::ensure!(a <= b, "empty tap range {token:?}");
            taps.extend(a..=b);
        } else {
            taps.push(token.parse()?);
        }
    }
    anyhow::ensure!(!taps.is_empty(), "no taps given");
    Ok(taps)
}
