use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::error_sets::build_error_sets;
use crate::error_vector::ErrorVector;
use crate::input::{validate_pmf, InputDistribution};
use crate::word::check_width;

/// Default width cap for the quadratic-in-`2^L` reference computation.
pub const BRUTE_FORCE_DEFAULT_LIMIT: u8 = 8;

/// Distribution of the integer distortion `|transmitted - received|`.
/// `tail[m]` is the probability that the distortion exceeds `m`, computed as
/// the suffix sum of the pmf so that it is non-increasing and exactly zero at
/// the largest magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistortionRepr", into = "DistortionRepr")]
pub struct DistortionDistribution {
    width: u8,
    pmf: Vec<f64>,
    tail: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistortionRepr {
    width: u8,
    pmf: Vec<f64>,
}

impl TryFrom<DistortionRepr> for DistortionDistribution {
    type Error = Error;

    fn try_from(r: DistortionRepr) -> Result<Self> {
        DistortionDistribution::from_pmf(r.width, r.pmf)
    }
}

impl From<DistortionDistribution> for DistortionRepr {
    fn from(d: DistortionDistribution) -> Self {
        DistortionRepr {
            width: d.width,
            pmf: d.pmf,
        }
    }
}

impl DistortionDistribution {
    pub fn from_pmf(width: u8, pmf: Vec<f64>) -> Result<Self> {
        validate_pmf(width, &pmf)?;
        let tail = tail_from_pmf(&pmf);
        Ok(DistortionDistribution { width, pmf, tail })
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    pub fn pmf_at(&self, m: u32) -> f64 {
        self.pmf[m as usize]
    }

    /// Probability that the distortion is strictly greater than `m`.
    pub fn tail_at(&self, m: u32) -> f64 {
        self.tail[m as usize]
    }
}

pub(crate) fn tail_from_pmf(pmf: &[f64]) -> Vec<f64> {
    let n = pmf.len();
    let mut tail = vec![0.0; n];
    for m in (0..n - 1).rev() {
        tail[m] = tail[m + 1] + pmf[m + 1];
    }
    tail
}

fn check_widths(ch: &ChannelModel, input: &InputDistribution) -> Result<u8> {
    if ch.width() != input.width() {
        return Err(Error::WidthMismatch {
            expected: input.width(),
            actual: ch.width(),
        });
    }
    Ok(ch.width())
}

/// Total probability of one error pattern: the sum over its compatible words
/// of the word probability times the per-bit factors (`p_down` where the
/// entry is -1, `p_up` where it is +1, the complement of the possible flip
/// where it is 0).
///
/// Panics if the widths of the three arguments disagree.
pub fn error_vector_probability(
    eps: &ErrorVector,
    ch: &ChannelModel,
    input: &InputDistribution,
) -> f64 {
    assert_eq!(eps.width(), ch.width(), "error vector and channel widths differ");
    assert_eq!(eps.width(), input.width(), "error vector and input widths differ");
    let width = eps.width();
    let mut total = 0.0;
    for word in eps.compatible_words() {
        let x = word.value();
        let fx = input.probability(x);
        if fx == 0.0 {
            continue;
        }
        let mut prod = fx;
        for i in 0..width {
            prod *= match eps.entry(i) {
                -1 => ch.p_down(x, i),
                1 => ch.p_up(x, i),
                _ => {
                    if word.bit(i) {
                        1.0 - ch.p_down(x, i)
                    } else {
                        1.0 - ch.p_up(x, i)
                    }
                }
            };
        }
        total += prod;
    }
    total
}

/// Distortion pmf by summing [`error_vector_probability`] over every error
/// pattern of each magnitude. Requires the materialized error sets, so the
/// width is capped at [`crate::MATERIALIZATION_LIMIT`].
pub fn distortion_pmf_enumerative(
    ch: &ChannelModel,
    input: &InputDistribution,
) -> Result<DistortionDistribution> {
    let width = check_widths(ch, input)?;
    let sets = build_error_sets(width)?;
    let n = 1usize << width;
    let mut pmf = vec![0.0; n];
    for (m, slot) in pmf.iter_mut().enumerate() {
        *slot = sets
            .magnitude_class(m as u32)
            .map(|eps| error_vector_probability(eps, ch, input))
            .sum();
    }
    DistortionDistribution::from_pmf(width, pmf)
}

/// Distortion pmf by, for each supported word, building the distribution of
/// the received value one bit at a time and folding it at the transmitted
/// value. Numerically equivalent to the enumerative path but linear in the
/// number of supported words times `2^L`.
pub fn distortion_pmf_fast(
    ch: &ChannelModel,
    input: &InputDistribution,
) -> Result<DistortionDistribution> {
    let width = check_widths(ch, input)?;
    let n = 1usize << width;
    let mut pmf = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    for x in 0..n as u16 {
        let fx = input.probability(x);
        if fx == 0.0 {
            continue;
        }
        cur[0] = 1.0;
        let mut len = 1usize;
        for i in 0..width {
            // Probability of receiving 0 / 1 at bit i given the sent bit.
            let (p0, p1) = if (x >> i) & 1 == 1 {
                (ch.p_down(x, i), 1.0 - ch.p_down(x, i))
            } else {
                (1.0 - ch.p_up(x, i), ch.p_up(x, i))
            };
            for j in 0..len {
                let c = cur[j];
                next[j] = c * p0;
                next[j + len] = c * p1;
            }
            len <<= 1;
            std::mem::swap(&mut cur, &mut next);
        }
        for (w, &pw) in cur.iter().enumerate() {
            let m = (x as i32 - w as i32).unsigned_abs() as usize;
            pmf[m] += fx * pw;
        }
    }
    DistortionDistribution::from_pmf(width, pmf)
}

/// Reference computation: iterate over all `4^L` transmitted/received pairs
/// and accumulate the per-bit transition product. Kept deliberately plain so
/// the faster paths can be checked against it.
pub fn brute_force_oracle(
    ch: &ChannelModel,
    input: &InputDistribution,
) -> Result<DistortionDistribution> {
    brute_force_oracle_with_limit(ch, input, BRUTE_FORCE_DEFAULT_LIMIT)
}

pub fn brute_force_oracle_with_limit(
    ch: &ChannelModel,
    input: &InputDistribution,
    width_limit: u8,
) -> Result<DistortionDistribution> {
    let width = check_widths(ch, input)?;
    if width > width_limit {
        return Err(Error::InvalidArgument(format!(
            "brute-force path is quadratic in 2^L; width {width} exceeds the limit {width_limit}"
        )));
    }
    let n = 1usize << width;
    let mut pmf = vec![0.0; n];
    for x in 0..n as u16 {
        let fx = input.probability(x);
        if fx == 0.0 {
            continue;
        }
        for xhat in 0..n as u16 {
            let mut p = fx;
            for i in 0..width {
                let sent = (x >> i) & 1;
                let got = (xhat >> i) & 1;
                p *= match (sent, got) {
                    (1, 0) => ch.p_down(x, i),
                    (1, 1) => 1.0 - ch.p_down(x, i),
                    (0, 1) => ch.p_up(x, i),
                    _ => 1.0 - ch.p_up(x, i),
                };
            }
            let m = (x as i32 - xhat as i32).unsigned_abs() as usize;
            pmf[m] += p;
        }
    }
    DistortionDistribution::from_pmf(width, pmf)
}

/// Closed form for a word-independent channel driven by the exactly uniform
/// input: the scaled signed convolution of the per-bit three-point factors
/// (`p_down` at `-2^i`, `2 - p_down - p_up` at 0, `p_up` at `+2^i`).
pub fn uniform_word_independent_pmf(
    p_down: &[f64],
    p_up: &[f64],
) -> Result<DistortionDistribution> {
    let ch = ChannelModel::word_independent(p_down.to_vec(), p_up.to_vec())?;
    let width = ch.width();
    let n = 1usize << width;
    let mut scratch = UniformConvScratch::new(width);
    let mut pmf = vec![0.0; n];
    uniform_pmf_into(p_down, p_up, &mut scratch, &mut pmf);
    DistortionDistribution::from_pmf(width, pmf)
}

/// Scratch buffers for [`uniform_pmf_into`], sized for one width.
pub(crate) struct UniformConvScratch {
    width: u8,
    cur: Vec<f64>,
    next: Vec<f64>,
}

impl UniformConvScratch {
    pub(crate) fn new(width: u8) -> Self {
        let span = 2 * ((1usize << width) - 1) + 1;
        UniformConvScratch {
            width,
            cur: vec![0.0; span],
            next: vec![0.0; span],
        }
    }
}

/// Allocation-free engine behind [`uniform_word_independent_pmf`]; also the
/// candidate evaluator of the searches, which call it millions of times.
pub(crate) fn uniform_pmf_into(
    p_down: &[f64],
    p_up: &[f64],
    scratch: &mut UniformConvScratch,
    pmf: &mut [f64],
) {
    let width = p_down.len();
    debug_assert_eq!(width as u8, scratch.width);
    debug_assert_eq!(pmf.len(), 1usize << width);
    let offset = (1usize << width) - 1;
    let cur = &mut scratch.cur;
    let next = &mut scratch.next;
    cur[offset] = 1.0;
    let (mut lo, mut hi) = (offset, offset);
    for i in 0..width {
        let stride = 1usize << i;
        let (pd, pu) = (p_down[i], p_up[i]);
        let keep = 2.0 - pd - pu;
        next[lo - stride..=hi + stride].fill(0.0);
        for n in lo..=hi {
            let c = cur[n];
            if c != 0.0 {
                next[n] += c * keep;
                next[n - stride] += c * pd;
                next[n + stride] += c * pu;
            }
        }
        lo -= stride;
        hi += stride;
        std::mem::swap(cur, next);
    }
    let scale = 1.0 / (1usize << width) as f64;
    pmf[0] = cur[offset] * scale;
    for m in 1..pmf.len() {
        pmf[m] = (cur[offset + m] + cur[offset - m]) * scale;
    }
    // Leave no stale state: the next call rebuilds from a point mass.
    cur[lo..=hi].fill(0.0);
}

/// Empirical distortion distribution from `samples` simulated transmissions.
/// Fully determined by the seed: words are drawn by inverting the input cdf
/// and bits are flipped in ascending position order.
pub fn monte_carlo_distortion(
    ch: &ChannelModel,
    input: &InputDistribution,
    samples: u64,
    seed: u64,
) -> Result<DistortionDistribution> {
    let width = check_widths(ch, input)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let n = 1usize << width;
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &p in input.pmf() {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; n];
    for _ in 0..samples {
        let u: f64 = rng.random();
        let x = cdf.partition_point(|&c| c <= u).min(n - 1) as u16;
        let mut received = x;
        for i in 0..width {
            let roll: f64 = rng.random();
            if (x >> i) & 1 == 1 {
                if roll < ch.p_down(x, i) {
                    received &= !(1 << i);
                }
            } else if roll < ch.p_up(x, i) {
                received |= 1 << i;
            }
        }
        let m = (x as i32 - received as i32).unsigned_abs() as usize;
        counts[m] += 1;
    }
    let total = samples as f64;
    let pmf = counts.iter().map(|&c| c as f64 / total).collect();
    DistortionDistribution::from_pmf(width, pmf)
}

/// Check a width argument for table-building helpers.
pub fn check_supported_width(width: u8) -> Result<()> {
    check_width(width)
}
