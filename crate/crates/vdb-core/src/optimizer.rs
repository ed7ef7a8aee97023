use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::distortion::{
    distortion_pmf_fast, tail_from_pmf, uniform_pmf_into, uniform_word_independent_pmf,
    DistortionDistribution, UniformConvScratch,
};
use crate::error::{Error, Result};
use crate::input::InputDistribution;
use crate::word::check_width;

/// Slack applied to every tail-bound comparison, absorbing accumulated
/// rounding in the suffix sums.
pub const CONSTRAINT_SLACK: f64 = 1e-12;

/// Finest probability step the searches work at: 2^-7.
pub const FINEST_RESOLUTION_LOG2: u8 = 7;

/// Number of passes of the bit-level search: a 2^-2 opening step and five
/// refinements.
pub const ADAPTIVE_STEPS: usize = 6;

const TICK_DENOM: f64 = 128.0;
const MAX_TICK: u8 = 64; // probability 1/2
const MAX_ENTRIES: usize = 32; // two polarities at width <= 16

/// Upper bound on the distortion tail, one entry per magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstraintRepr", into = "ConstraintRepr")]
pub struct ConstraintTail {
    width: u8,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintRepr {
    width: u8,
    tail: Vec<f64>,
}

impl TryFrom<ConstraintRepr> for ConstraintTail {
    type Error = Error;

    fn try_from(r: ConstraintRepr) -> Result<Self> {
        ConstraintTail::new(r.width, r.tail)
    }
}

impl From<ConstraintTail> for ConstraintRepr {
    fn from(c: ConstraintTail) -> Self {
        ConstraintRepr {
            width: c.width,
            tail: c.values,
        }
    }
}

impl ConstraintTail {
    pub fn new(width: u8, values: Vec<f64>) -> Result<Self> {
        check_width(width)?;
        if values.len() != 1usize << width {
            return Err(Error::InvalidArgument(format!(
                "constraint needs {} entries for width {width}, got {}",
                1usize << width,
                values.len()
            )));
        }
        for (m, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "constraint entry {m} is {v}, must be in [0, 1]"
                )));
            }
            if m > 0 && v > values[m - 1] + CONSTRAINT_SLACK {
                return Err(Error::InvalidArgument(format!(
                    "constraint must be non-increasing, rises at {m}"
                )));
            }
        }
        Ok(ConstraintTail { width, values })
    }

    /// The vacuous bound that admits every channel.
    pub fn unconstrained(width: u8) -> Result<Self> {
        check_width(width)?;
        Ok(ConstraintTail {
            width,
            values: vec![1.0; 1usize << width],
        })
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-bit flip probabilities the searches optimize over, all entries dyadic
/// multiples of `2^-resolution_log2` inside `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbabilityVectorRepr")]
pub struct ProbabilityVector {
    down: Vec<f64>,
    up: Vec<f64>,
    resolution_log2: u8,
}

#[derive(Deserialize)]
struct ProbabilityVectorRepr {
    down: Vec<f64>,
    up: Vec<f64>,
    resolution_log2: u8,
}

impl TryFrom<ProbabilityVectorRepr> for ProbabilityVector {
    type Error = Error;

    fn try_from(r: ProbabilityVectorRepr) -> Result<Self> {
        ProbabilityVector::new(r.down, r.up, r.resolution_log2)
    }
}

impl ProbabilityVector {
    pub fn new(down: Vec<f64>, up: Vec<f64>, resolution_log2: u8) -> Result<Self> {
        if down.len() != up.len() {
            return Err(Error::InvalidArgument(format!(
                "down has {} entries, up has {}",
                down.len(),
                up.len()
            )));
        }
        check_width(down.len() as u8)?;
        if resolution_log2 == 0 || resolution_log2 > FINEST_RESOLUTION_LOG2 {
            return Err(Error::InvalidArgument(format!(
                "resolution 2^-{resolution_log2} outside supported 2^-1..2^-7"
            )));
        }
        let scale = (1u32 << resolution_log2) as f64;
        for &p in down.iter().chain(up.iter()) {
            if !p.is_finite() || !(0.0..=0.5).contains(&p) {
                return Err(Error::InvalidProbability(format!(
                    "entry {p} outside [0, 1/2]"
                )));
            }
            if (p * scale).fract() != 0.0 {
                return Err(Error::InvalidProbability(format!(
                    "entry {p} is not a multiple of 2^-{resolution_log2}"
                )));
            }
        }
        Ok(ProbabilityVector {
            down,
            up,
            resolution_log2,
        })
    }

    pub fn zero(width: u8, resolution_log2: u8) -> Result<Self> {
        Self::new(
            vec![0.0; width as usize],
            vec![0.0; width as usize],
            resolution_log2,
        )
    }

    pub fn width(&self) -> u8 {
        self.down.len() as u8
    }

    pub fn down(&self) -> &[f64] {
        &self.down
    }

    pub fn up(&self) -> &[f64] {
        &self.up
    }

    pub fn resolution_log2(&self) -> u8 {
        self.resolution_log2
    }

    pub fn as_channel(&self) -> ChannelModel {
        ChannelModel::word_independent(self.down.clone(), self.up.clone())
            .expect("validated on construction")
    }
}

/// Squared Euclidean norm of the stacked probability vector: larger means
/// more aggressive error probabilities, hence more saved energy.
pub fn benefit(p: &ProbabilityVector) -> f64 {
    p.down
        .iter()
        .chain(p.up.iter())
        .map(|&x| x * x)
        .sum()
}

/// Input-weighted benefit of a channel: the mean over transmitted words of
/// the squared norm of that word's probability pair. Collapses to the plain
/// norm for word-independent channels.
pub fn average_benefit(ch: &ChannelModel, input: &InputDistribution) -> Result<f64> {
    if ch.width() != input.width() {
        return Err(Error::WidthMismatch {
            expected: input.width(),
            actual: ch.width(),
        });
    }
    let width = ch.width();
    let mut total = 0.0;
    for x in 0..(1usize << width) as u16 {
        let fx = input.probability(x);
        if fx == 0.0 {
            continue;
        }
        let mut b = 0.0;
        for i in 0..width {
            let d = ch.p_down(x, i);
            let u = ch.p_up(x, i);
            b += d * d + u * u;
        }
        total += fx * b;
    }
    Ok(total)
}

/// True when the distortion tail stays under the bound everywhere, with
/// [`CONSTRAINT_SLACK`] of rounding headroom.
pub fn satisfies_constraint(d: &DistortionDistribution, t: &ConstraintTail) -> Result<bool> {
    if d.width() != t.width() {
        return Err(Error::WidthMismatch {
            expected: t.width(),
            actual: d.width(),
        });
    }
    Ok(d
        .tail()
        .iter()
        .zip(t.values())
        .all(|(&tail, &bound)| tail <= bound + CONSTRAINT_SLACK))
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub best: ProbabilityVector,
    pub benefit: f64,
    pub induced: DistortionDistribution,
    pub evaluations: u64,
    pub feasible: bool,
    /// Benefit of the incumbent after each pass (one entry per refinement
    /// step; a single entry for the one-pass grid search).
    pub step_benefits: Vec<f64>,
}

/// Which increments a refinement step may apply to each entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    /// Add zero or one resolution step (the default).
    NonNegative,
    /// Add or subtract one resolution step, clamped to `[0, 1/2]`.
    Symmetric,
}

/// Candidate state in 2^-7 ticks; entries 0..=64 map to 0..=1/2.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Ticks {
    len: usize,
    v: [u8; MAX_ENTRIES],
}

impl Ticks {
    fn zero(width: usize) -> Self {
        Ticks {
            len: 2 * width,
            v: [0; MAX_ENTRIES],
        }
    }

    fn slice(&self) -> &[u8] {
        &self.v[..self.len]
    }

    fn benefit_num(&self) -> u32 {
        self.slice().iter().map(|&k| (k as u32) * (k as u32)).sum()
    }

    fn to_probability_vector(self, resolution_log2: u8) -> ProbabilityVector {
        let width = self.len / 2;
        let prob = |k: u8| k as f64 / TICK_DENOM;
        ProbabilityVector::new(
            self.v[..width].iter().copied().map(prob).collect(),
            self.v[width..self.len].iter().copied().map(prob).collect(),
            resolution_log2,
        )
        .expect("ticks stay in range")
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    benefit_num: u32,
    ticks: Ticks,
}

impl Candidate {
    /// Total strict preference order: higher benefit, then lexicographically
    /// smaller (down, up) vector, which makes the parallel reduction
    /// deterministic.
    fn beats(&self, other: &Candidate) -> bool {
        self.benefit_num > other.benefit_num
            || (self.benefit_num == other.benefit_num && self.ticks.slice() < other.ticks.slice())
    }
}

fn merge(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
    }
}

/// Margin added on top of [`CONSTRAINT_SLACK`] when a differently
/// associated convolution screens candidates for the exact evaluator. It
/// dwarfs the worst-case rounding drift between the two summation orders,
/// so the screen never discards a candidate the exact check would accept.
const FILTER_MARGIN: f64 = 1e-9;

/// Per-worker candidate evaluator; reuses scratch buffers across calls.
struct Evaluator<'a> {
    input: &'a InputDistribution,
    bound: &'a [f64],
    uniform: bool,
    scratch: UniformConvScratch,
    pmf: Vec<f64>,
    p_down: Vec<f64>,
    p_up: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(input: &'a InputDistribution, bound: &'a [f64]) -> Self {
        let width = input.width();
        let n = 1usize << width;
        Evaluator {
            input,
            bound,
            uniform: input.is_exactly_uniform(),
            scratch: UniformConvScratch::new(width),
            pmf: vec![0.0; n],
            p_down: vec![0.0; width as usize],
            p_up: vec![0.0; width as usize],
        }
    }

    fn feasible(&mut self, ticks: &Ticks) -> bool {
        let width = ticks.len / 2;
        for i in 0..width {
            self.p_down[i] = ticks.v[i] as f64 / TICK_DENOM;
            self.p_up[i] = ticks.v[width + i] as f64 / TICK_DENOM;
        }
        if self.uniform {
            uniform_pmf_into(&self.p_down, &self.p_up, &mut self.scratch, &mut self.pmf);
        } else {
            let ch = ChannelModel::word_independent(self.p_down.clone(), self.p_up.clone())
                .expect("ticks stay in range");
            let d = distortion_pmf_fast(&ch, self.input).expect("widths agree");
            self.pmf.copy_from_slice(d.pmf());
        }
        // Same suffix accumulation order as the tail constructor, so the
        // returned distribution reproduces this check bit for bit.
        let n = self.pmf.len();
        let mut acc = 0.0;
        for m in (0..n - 1).rev() {
            acc += self.pmf[m + 1];
            if acc > self.bound[m] + CONSTRAINT_SLACK {
                return false;
            }
        }
        true
    }
}

/// One assignment of symmetric moves to the coordinates of a contiguous
/// bit range, with the signed error-sum distribution those bits induce
/// under the uniform input.
struct HalfCombo {
    /// Chosen ticks, down block then up block, in bit order.
    key: Vec<u8>,
    benefit_num: u32,
    /// Largest |signed sum| carrying mass, in local units of the lowest bit.
    maxabs: usize,
    /// Signed-sum distribution over `center ± (2^bits - 1)` local units,
    /// scaled by `2^-bits`.
    dist: Vec<f64>,
}

/// Enumerates every `{-step, 0, +step}` move (clamped to `[0, 64]` ticks,
/// duplicates collapsed) of the `2 * bits` coordinates covering
/// `bit_start..bit_start + bits`, together with each assignment's signed
/// error-sum distribution.
fn half_combos(base: &Ticks, width: usize, bit_start: usize, bits: usize, step: u8) -> Vec<HalfCombo> {
    let mut choices: Vec<Vec<u8>> = Vec::with_capacity(2 * bits);
    for block in [0, width] {
        for b in 0..bits {
            let t = base.v[block + bit_start + b];
            let mut c = vec![t];
            let up = (t + step).min(MAX_TICK);
            let down = t.saturating_sub(step);
            if up != t {
                c.push(up);
            }
            if down != t {
                c.push(down);
            }
            c.sort_unstable();
            choices.push(c);
        }
    }

    let span = 2 * ((1usize << bits) - 1) + 1;
    let center = (1usize << bits) - 1;
    let scale = 1.0 / (1usize << bits) as f64;
    let total: usize = choices.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut odometer = vec![0usize; 2 * bits];
    let mut cur = vec![0.0f64; span];
    let mut next = vec![0.0f64; span];
    loop {
        let key: Vec<u8> = odometer
            .iter()
            .zip(&choices)
            .map(|(&pick, c)| c[pick])
            .collect();
        cur.fill(0.0);
        cur[center] = 1.0;
        let (mut lo, mut hi) = (center, center);
        for b in 0..bits {
            let stride = 1usize << b;
            let pd = key[b] as f64 / TICK_DENOM;
            let pu = key[bits + b] as f64 / TICK_DENOM;
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
            std::mem::swap(&mut cur, &mut next);
        }
        let dist: Vec<f64> = cur.iter().map(|&v| v * scale).collect();
        let maxabs = dist
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != 0.0)
            .map(|(i, _)| i.abs_diff(center))
            .max()
            .unwrap_or(0);
        out.push(HalfCombo {
            benefit_num: key.iter().map(|&k| (k as u32) * (k as u32)).sum(),
            key,
            maxabs,
            dist,
        });

        let mut pos = 0;
        loop {
            if pos == odometer.len() {
                return out;
            }
            odometer[pos] += 1;
            if odometer[pos] < choices[pos].len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

/// Smallest low-half reach (largest |low sum|) a feasible candidate built
/// on this high half could have: the tail is at least
/// `P(|B| > m + reach)` pointwise, so any reach below the returned value
/// is provably infeasible against `boundp` (the bound with screening
/// margin applied). Returns `max_reach + 1` when even the largest reach
/// cannot help, which rejects the whole row.
fn min_viable_reach(hi: &HalfCombo, k_lo: usize, max_reach: usize, boundp: &[f64]) -> usize {
    let n = boundp.len();
    let stride = 1usize << k_lo;
    let center = hi.dist.len() / 2;
    // suffix[jj] = P(|B| >= jj * stride), local units.
    let mut suffix = vec![0.0f64; center + 2];
    for jj in (1..=center).rev() {
        suffix[jj] = suffix[jj + 1] + hi.dist[center + jj] + hi.dist[center - jj];
    }
    'reach: for a in 0..=max_reach {
        for jj in 1..=center {
            // |B| > m + a first bites at m = jj*stride - 1 - a; the bound
            // is non-increasing, so that largest m is the binding one.
            let Some(m) = (jj * stride).checked_sub(1 + a) else {
                continue;
            };
            if suffix[jj] > boundp[m.min(n - 1)] {
                continue 'reach;
            }
        }
        return a;
    }
    max_reach + 1
}

/// Screens one (low, high) assignment pair: convolves the half
/// distributions, folds to a magnitude tail and compares against the
/// margin-widened bound. `false` is definitive infeasibility; `true`
/// still needs the exact evaluator.
fn pair_filter(lo: &[f64], hi: &[f64], k_lo: usize, boundp: &[f64], buf: &mut [f64]) -> bool {
    let n = buf.len();
    let c_lo = (lo.len() / 2) as i64;
    let c_hi = (hi.len() / 2) as i64;
    buf.fill(0.0);
    for (j, &pj) in hi.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        let sh = (j as i64 - c_hi) << k_lo;
        for (i, &pi) in lo.iter().enumerate() {
            if pi != 0.0 {
                let s = sh + i as i64 - c_lo;
                buf[s.unsigned_abs() as usize] += pj * pi;
            }
        }
    }
    let mut acc = 0.0;
    for m in (0..n - 1).rev() {
        acc += buf[m + 1];
        if acc > boundp[m] {
            return false;
        }
    }
    true
}

/// One symmetric refinement pass for the exactly uniform input, organized
/// as a meet-in-the-middle scan over low-bit and high-bit half
/// assignments. Provably infeasible regions are skipped wholesale and the
/// rest is visited in benefit order, so the selected candidate (and its
/// tie-break) is identical to enumerating all `3^(2L)` moves through the
/// exact evaluator, only far cheaper.
fn symmetric_step_uniform(
    base: Ticks,
    tick_step: u8,
    ev: &mut Evaluator<'_>,
    boundp: &[f64],
    incumbent_benefit: u32,
) -> Candidate {
    let width = base.len / 2;
    let k_lo = width / 2;
    let k_hi = width - k_lo;
    let n = boundp.len();
    let max_reach = (1usize << k_lo) - 1;

    let mut lows = half_combos(&base, width, 0, k_lo, tick_step);
    lows.sort_unstable_by(|a, b| b.benefit_num.cmp(&a.benefit_num).then_with(|| a.key.cmp(&b.key)));
    let lo_max_benefit = lows.first().map_or(0, |l| l.benefit_num);
    let mut rows = half_combos(&base, width, k_lo, k_hi, tick_step);
    rows.sort_unstable_by(|a, b| b.benefit_num.cmp(&a.benefit_num).then_with(|| a.key.cmp(&b.key)));

    let mut buf = vec![0.0f64; n];
    let mut best: Option<Candidate> = None;
    let mut feasible_benefit = incumbent_benefit;
    for row in &rows {
        // Rows arrive in descending benefit; nothing later can strictly
        // beat a feasible benefit already in hand.
        if row.benefit_num + lo_max_benefit < feasible_benefit {
            break;
        }
        let reach = min_viable_reach(row, k_lo, max_reach, boundp);
        if reach > max_reach {
            continue;
        }
        for low in &lows {
            let total = row.benefit_num + low.benefit_num;
            if total < feasible_benefit {
                break;
            }
            if low.maxabs < reach || !pair_filter(&low.dist, &row.dist, k_lo, boundp, &mut buf) {
                continue;
            }
            let mut ticks = base;
            for (b, &v) in low.key[..k_lo].iter().enumerate() {
                ticks.v[b] = v;
            }
            for (b, &v) in low.key[k_lo..].iter().enumerate() {
                ticks.v[width + b] = v;
            }
            for (b, &v) in row.key[..k_hi].iter().enumerate() {
                ticks.v[k_lo + b] = v;
            }
            for (b, &v) in row.key[k_hi..].iter().enumerate() {
                ticks.v[width + k_lo + b] = v;
            }
            if !ev.feasible(&ticks) {
                continue;
            }
            // First exact hit in (benefit desc, key asc) order is this
            // row's winner; later rows may still tie and win on the full
            // lexicographic comparison.
            let cand = Candidate {
                benefit_num: total,
                ticks,
            };
            if best.as_ref().is_none_or(|b| cand.beats(b)) {
                best = Some(cand);
            }
            feasible_benefit = feasible_benefit.max(total);
            break;
        }
    }
    best.expect("the incumbent is always feasible")
}

fn check_search_inputs(input: &InputDistribution, constraint: &ConstraintTail) -> Result<u8> {
    if input.width() != constraint.width() {
        return Err(Error::WidthMismatch {
            expected: input.width(),
            actual: constraint.width(),
        });
    }
    Ok(input.width())
}

fn induced_distribution(
    p: &ProbabilityVector,
    input: &InputDistribution,
) -> Result<DistortionDistribution> {
    if input.is_exactly_uniform() {
        uniform_word_independent_pmf(p.down(), p.up())
    } else {
        distortion_pmf_fast(&p.as_channel(), input)
    }
}

fn finish(
    best: Ticks,
    resolution_log2: u8,
    input: &InputDistribution,
    constraint: &ConstraintTail,
    evaluations: u64,
    step_benefits: Vec<f64>,
) -> Result<SearchResult> {
    let best = best.to_probability_vector(resolution_log2);
    let induced = induced_distribution(&best, input)?;
    let feasible = satisfies_constraint(&induced, constraint)?;
    Ok(SearchResult {
        benefit: benefit(&best),
        best,
        induced,
        evaluations,
        feasible,
        step_benefits,
    })
}

/// Grid search over a single probability pair applied to every bit: all
/// `(p_down, p_up)` on the `2^-resolution_log2` grid inside `[0, 1/2]^2`.
/// Ties resolve to the lexicographically smallest pair.
pub fn exhaustive_search_bit_independent(
    input: &InputDistribution,
    constraint: &ConstraintTail,
    resolution_log2: u8,
) -> Result<SearchResult> {
    let width = check_search_inputs(input, constraint)? as usize;
    if resolution_log2 == 0 || resolution_log2 > FINEST_RESOLUTION_LOG2 {
        return Err(Error::InvalidArgument(format!(
            "resolution 2^-{resolution_log2} outside supported 2^-1..2^-7"
        )));
    }
    let tick_step = 1u8 << (FINEST_RESOLUTION_LOG2 - resolution_log2);
    let points = (1usize << (resolution_log2 - 1)) + 1; // 0..=1/2 inclusive
    let bound = constraint.values();

    let best = (0..points * points)
        .into_par_iter()
        .map_init(
            || Evaluator::new(input, bound),
            |ev, idx| {
                let (ja, jb) = (idx / points, idx % points);
                let mut ticks = Ticks::zero(width);
                ticks.v[..width].fill(ja as u8 * tick_step);
                ticks.v[width..2 * width].fill(jb as u8 * tick_step);
                if ev.feasible(&ticks) {
                    Some(Candidate {
                        benefit_num: ticks.benefit_num(),
                        ticks,
                    })
                } else {
                    None
                }
            },
        )
        .reduce(|| None, merge)
        .expect("the all-zero pair is always feasible");

    let benefit = best.benefit_num as f64 / (TICK_DENOM * TICK_DENOM);
    finish(
        best.ticks,
        resolution_log2,
        input,
        constraint,
        (points * points) as u64,
        vec![benefit],
    )
}

/// Bit-level refinement search with the default non-negative neighborhood.
///
/// Step 1 evaluates every vector `delta * 2^-2` with `delta` in
/// `{0,1}^(2L)`. Step `n` adds `delta * 2^-(n+1)` to the incumbent,
/// clamped to `[0, 1/2]`, so the increments halve every pass down to
/// the final 2^-7 lattice and an entry grown at every step tops out at
/// 63/128. The incumbent is always among the candidates, so the benefit
/// never decreases. Candidate count is `2^(2L)` per step; widths much
/// beyond 8 get expensive.
pub fn adaptive_search_bit_level(
    input: &InputDistribution,
    constraint: &ConstraintTail,
) -> Result<SearchResult> {
    adaptive_search_bit_level_with(input, constraint, Neighborhood::NonNegative)
}

/// [`adaptive_search_bit_level`] with an explicit neighborhood. The
/// symmetric variant covers `3^(2L)` candidates per step; under the
/// exactly uniform input it runs through a screened meet-in-the-middle
/// scan that selects the same candidate as plain enumeration, so it stays
/// fast up to width 10. Other inputs fall back to plain enumeration and
/// are only practical at small widths.
pub fn adaptive_search_bit_level_with(
    input: &InputDistribution,
    constraint: &ConstraintTail,
    neighborhood: Neighborhood,
) -> Result<SearchResult> {
    let width = check_search_inputs(input, constraint)? as usize;
    let entries = 2 * width;
    let bound = constraint.values();
    // Screened meet-in-the-middle is exact only under the per-bit product
    // form of the uniform input, and its half tables grow as 3^width.
    let split_symmetric = neighborhood == Neighborhood::Symmetric
        && input.is_exactly_uniform()
        && width <= 10;
    let boundp: Vec<f64> = bound
        .iter()
        .map(|&b| b + CONSTRAINT_SLACK + FILTER_MARGIN)
        .collect();
    let mut split_evaluator = Evaluator::new(input, bound);

    let mut incumbent = Candidate {
        benefit_num: 0,
        ticks: Ticks::zero(width),
    };
    let mut evaluations = 0u64;
    let mut step_benefits = Vec::with_capacity(ADAPTIVE_STEPS);

    for step in 1..=ADAPTIVE_STEPS {
        // Step n moves in 2^-(n+1) increments, expressed in 2^-7 ticks:
        // 32, 16, 8, 4, 2, 1. Partial sums cover every tick value 0..=63.
        let tick_step = 1u8 << (FINEST_RESOLUTION_LOG2 as usize - 1 - step);
        let base = incumbent.ticks;
        let count: u64 = match neighborhood {
            Neighborhood::NonNegative => 1u64 << entries,
            Neighborhood::Symmetric => 3u64.pow(entries as u32),
        };
        let stepped = if split_symmetric {
            symmetric_step_uniform(
                base,
                tick_step,
                &mut split_evaluator,
                &boundp,
                incumbent.benefit_num,
            )
        } else {
            (0..count)
                .into_par_iter()
                .map_init(
                    || Evaluator::new(input, bound),
                    |ev, idx| {
                        let mut ticks = base;
                        match neighborhood {
                            Neighborhood::NonNegative => {
                                for j in 0..entries {
                                    if (idx >> j) & 1 == 1 {
                                        ticks.v[j] = (ticks.v[j] + tick_step).min(MAX_TICK);
                                    }
                                }
                            }
                            Neighborhood::Symmetric => {
                                let mut rest = idx;
                                for j in 0..entries {
                                    match rest % 3 {
                                        1 => ticks.v[j] = (ticks.v[j] + tick_step).min(MAX_TICK),
                                        2 => ticks.v[j] = ticks.v[j].saturating_sub(tick_step),
                                        _ => {}
                                    }
                                    rest /= 3;
                                }
                            }
                        }
                        if ev.feasible(&ticks) {
                            Some(Candidate {
                                benefit_num: ticks.benefit_num(),
                                ticks,
                            })
                        } else {
                            None
                        }
                    },
                )
                .reduce(|| None, merge)
                .expect("the incumbent is always feasible")
        };
        evaluations += count;
        incumbent = stepped;
        step_benefits.push(incumbent.benefit_num as f64 / (TICK_DENOM * TICK_DENOM));
    }

    finish(
        incumbent.ticks,
        FINEST_RESOLUTION_LOG2,
        input,
        constraint,
        evaluations,
        step_benefits,
    )
}

/// Random feasibility bound: draw a per-bit vector uniformly from
/// `[0, 1/2)^L` and take the distortion tail of the scenario where the
/// all-zero word is sent through those probabilities acting upward. The pmf
/// is the explicit per-bit product, so the tail is attainable by
/// construction. Returns the bound and the drawn vector.
pub fn generate_random_constraint(width: u8, seed: u64) -> Result<(ConstraintTail, Vec<f64>)> {
    check_width(width)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_rand: Vec<f64> = (0..width).map(|_| rng.random::<f64>() * 0.5).collect();
    let n = 1usize << width;
    let mut pmf = vec![0.0; n];
    for (m, slot) in pmf.iter_mut().enumerate() {
        let mut p = 1.0;
        for (i, &q) in p_rand.iter().enumerate() {
            p *= if (m >> i) & 1 == 1 { q } else { 1.0 - q };
        }
        *slot = p;
    }
    let tail = tail_from_pmf(&pmf);
    Ok((ConstraintTail::new(width, tail)?, p_rand))
}

/// Tail induced by running the drawn vector through both polarities under
/// the given input; by the cancellation argument it stays under the
/// generated bound for the uniform input.
pub fn oracle_tail(p_rand: &[f64], input: &InputDistribution) -> Result<DistortionDistribution> {
    if p_rand.len() != input.width() as usize {
        return Err(Error::WidthMismatch {
            expected: input.width(),
            actual: p_rand.len() as u8,
        });
    }
    if input.is_exactly_uniform() {
        uniform_word_independent_pmf(p_rand, p_rand)
    } else {
        let ch = ChannelModel::word_independent(p_rand.to_vec(), p_rand.to_vec())?;
        distortion_pmf_fast(&ch, input)
    }
}
