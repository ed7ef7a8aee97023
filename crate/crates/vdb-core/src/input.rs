use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::check_width;

/// Probability mass allowed to be missing from a distribution before it is
/// rejected as unnormalized.
pub const PMF_SUM_TOLERANCE: f64 = 1e-12;

pub(crate) fn validate_pmf(width: u8, pmf: &[f64]) -> Result<()> {
    check_width(width)?;
    let expected = 1usize << width;
    if pmf.len() != expected {
        return Err(Error::InvalidDistribution(format!(
            "pmf has {} entries, width {} needs {}",
            pmf.len(),
            width,
            expected
        )));
    }
    for (i, &p) in pmf.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "pmf entry {i} is {p}, must be finite and non-negative"
            )));
        }
    }
    let sum: f64 = pmf.iter().sum();
    if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "pmf sums to {sum}, expected 1 within {PMF_SUM_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Probability mass function over the `2^L` words of width `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub struct InputDistribution {
    width: u8,
    pmf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionRepr {
    width: u8,
    pmf: Vec<f64>,
}

impl TryFrom<DistributionRepr> for InputDistribution {
    type Error = Error;

    fn try_from(r: DistributionRepr) -> Result<Self> {
        InputDistribution::from_pmf(r.width, r.pmf)
    }
}

impl From<InputDistribution> for DistributionRepr {
    fn from(d: InputDistribution) -> Self {
        DistributionRepr {
            width: d.width,
            pmf: d.pmf,
        }
    }
}

impl InputDistribution {
    pub fn from_pmf(width: u8, pmf: Vec<f64>) -> Result<Self> {
        validate_pmf(width, &pmf)?;
        Ok(InputDistribution { width, pmf })
    }

    pub fn uniform(width: u8) -> Result<Self> {
        check_width(width)?;
        let n = 1usize << width;
        Ok(InputDistribution {
            width,
            pmf: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(width: u8, value: u16) -> Result<Self> {
        check_width(width)?;
        let n = 1usize << width;
        if value as usize >= n {
            return Err(Error::ValueOutOfRange {
                value: value as u64,
                width,
            });
        }
        let mut pmf = vec![0.0; n];
        pmf[value as usize] = 1.0;
        Ok(InputDistribution { width, pmf })
    }

    /// Normalized empirical distribution of a sample list.
    pub fn empirical(width: u8, samples: &[u16]) -> Result<Self> {
        check_width(width)?;
        if samples.is_empty() {
            return Err(Error::InvalidDistribution(
                "no samples to build a distribution from".into(),
            ));
        }
        let n = 1usize << width;
        let mut counts = vec![0u64; n];
        for &s in samples {
            if s as usize >= n {
                return Err(Error::ValueOutOfRange {
                    value: s as u64,
                    width,
                });
            }
            counts[s as usize] += 1;
        }
        let total = samples.len() as f64;
        Ok(InputDistribution {
            width,
            pmf: counts.iter().map(|&c| c as f64 / total).collect(),
        })
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn probability(&self, word: u16) -> f64 {
        self.pmf[word as usize]
    }

    /// True only for the bit-exact uniform distribution; used to pick the
    /// closed-form distortion path.
    pub fn is_exactly_uniform(&self) -> bool {
        let u = 1.0 / self.pmf.len() as f64;
        self.pmf.iter().all(|&p| p == u)
    }
}
