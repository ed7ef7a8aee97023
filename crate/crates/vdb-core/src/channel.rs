use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::check_width;

/// Per-bit error probabilities of the link. `p_down` applies to a
/// transmitted 1 (flip to 0), `p_up` to a transmitted 0 (flip to 1); bits
/// fail independently given the transmitted word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
#[serde(try_from = "ChannelRepr")]
pub enum ChannelModel {
    /// One probability pair per bit position, the same for every word.
    #[serde(rename = "independent")]
    WordIndependent { p_down: Vec<f64>, p_up: Vec<f64> },
    /// Dense table: probabilities indexed by transmitted word, then bit.
    WordDependent {
        p_down: Vec<Vec<f64>>,
        p_up: Vec<Vec<f64>>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum ChannelRepr {
    Independent {
        p_down: Vec<f64>,
        p_up: Vec<f64>,
    },
    WordDependent {
        p_down: Vec<Vec<f64>>,
        p_up: Vec<Vec<f64>>,
    },
}

impl TryFrom<ChannelRepr> for ChannelModel {
    type Error = Error;

    fn try_from(r: ChannelRepr) -> Result<Self> {
        match r {
            ChannelRepr::Independent { p_down, p_up } => ChannelModel::word_independent(p_down, p_up),
            ChannelRepr::WordDependent { p_down, p_up } => ChannelModel::word_dependent(p_down, p_up),
        }
    }
}

fn check_prob_row(row: &[f64], what: &str) -> Result<()> {
    for (i, &p) in row.iter().enumerate() {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(format!(
                "{what} entry {i} is {p}, must be in [0, 1]"
            )));
        }
    }
    Ok(())
}

impl ChannelModel {
    pub fn word_independent(p_down: Vec<f64>, p_up: Vec<f64>) -> Result<Self> {
        if p_down.len() != p_up.len() {
            return Err(Error::InvalidArgument(format!(
                "p_down has {} entries, p_up has {}",
                p_down.len(),
                p_up.len()
            )));
        }
        check_width(p_down.len() as u8)?;
        check_prob_row(&p_down, "p_down")?;
        check_prob_row(&p_up, "p_up")?;
        Ok(ChannelModel::WordIndependent { p_down, p_up })
    }

    /// Same probability pair for every bit position.
    pub fn symmetric(width: u8, p_down: f64, p_up: f64) -> Result<Self> {
        check_width(width)?;
        Self::word_independent(vec![p_down; width as usize], vec![p_up; width as usize])
    }

    pub fn word_dependent(p_down: Vec<Vec<f64>>, p_up: Vec<Vec<f64>>) -> Result<Self> {
        let words = p_down.len();
        if words == 0 || !words.is_power_of_two() || p_up.len() != words {
            return Err(Error::InvalidArgument(format!(
                "tables must both hold 2^L rows, got {} and {}",
                words,
                p_up.len()
            )));
        }
        let width = words.trailing_zeros() as u8;
        check_width(width)?;
        for (x, (down, up)) in p_down.iter().zip(&p_up).enumerate() {
            if down.len() != width as usize || up.len() != width as usize {
                return Err(Error::InvalidArgument(format!(
                    "row {x} must hold {width} entries"
                )));
            }
            check_prob_row(down, "p_down")?;
            check_prob_row(up, "p_up")?;
        }
        Ok(ChannelModel::WordDependent { p_down, p_up })
    }

    pub fn width(&self) -> u8 {
        match self {
            ChannelModel::WordIndependent { p_down, .. } => p_down.len() as u8,
            ChannelModel::WordDependent { p_down, .. } => p_down.len().trailing_zeros() as u8,
        }
    }

    /// Probability that bit `i` of word `x` flips from 1 to 0.
    pub fn p_down(&self, x: u16, i: u8) -> f64 {
        match self {
            ChannelModel::WordIndependent { p_down, .. } => p_down[i as usize],
            ChannelModel::WordDependent { p_down, .. } => p_down[x as usize][i as usize],
        }
    }

    /// Probability that bit `i` of word `x` flips from 0 to 1.
    pub fn p_up(&self, x: u16, i: u8) -> f64 {
        match self {
            ChannelModel::WordIndependent { p_up, .. } => p_up[i as usize],
            ChannelModel::WordDependent { p_up, .. } => p_up[x as usize][i as usize],
        }
    }

    /// The error-free channel of the given width.
    pub fn noiseless(width: u8) -> Result<Self> {
        Self::symmetric(width, 0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_word_independent_lookup() {
        let ch = ChannelModel::word_independent(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        assert_eq!(ch.width(), 2);
        assert_eq!(ch.p_down(3, 1), 0.2);
        assert_eq!(ch.p_up(0, 0), 0.3);
    }

    #[test]
    fn test_word_dependent_lookup() {
        let down = vec![vec![0.0], vec![0.5]];
        let up = vec![vec![0.25], vec![0.0]];
        let ch = ChannelModel::word_dependent(down, up).unwrap();
        assert_eq!(ch.width(), 1);
        assert_eq!(ch.p_down(1, 0), 0.5);
        assert_eq!(ch.p_up(0, 0), 0.25);
    }

    #[test]
    fn test_validation() {
        assert!(ChannelModel::word_independent(vec![0.1], vec![]).is_err());
        assert!(ChannelModel::word_independent(vec![1.5], vec![0.0]).is_err());
        assert!(ChannelModel::word_dependent(vec![vec![0.1]; 3], vec![vec![0.1]; 3]).is_err());
    }

    #[test]
    fn test_json_round_trip() {
        let ch = ChannelModel::symmetric(2, 0.125, 0.0).unwrap();
        let text = serde_json::to_string(&ch).unwrap();
        assert!(text.contains("\"variant\":\"independent\""));
        let back: ChannelModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ch);

        let table = ChannelModel::word_dependent(vec![vec![0.1], vec![0.2]], vec![vec![0.0]; 2]).unwrap();
        let text = serde_json::to_string(&table).unwrap();
        assert!(text.contains("\"variant\":\"word_dependent\""));
        let back: ChannelModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, table);

        let bad = r#"{"variant":"independent","p_down":[2.0],"p_up":[0.0]}"#;
        assert!(serde_json::from_str::<ChannelModel>(bad).is_err());
    }
}
