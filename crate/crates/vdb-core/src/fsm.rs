use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// Register file of the channel adaptation module: `R_0` is the default
/// selection (idle, ACK, START/STOP), `R_1..R_L` drive the data bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr", into = "ConfigRepr")]
pub struct AdaptationConfig {
    word_length: u8,
    registers: Vec<u16>,
    selection_bits: u8,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    word_length: u8,
    registers: Vec<u16>,
    #[serde(default = "default_selection_bits")]
    selection_bits: u8,
}

fn default_selection_bits() -> u8 {
    8
}

impl TryFrom<ConfigRepr> for AdaptationConfig {
    type Error = Error;

    fn try_from(r: ConfigRepr) -> Result<Self> {
        AdaptationConfig::with_selection_bits(r.word_length, r.registers, r.selection_bits)
    }
}

impl From<AdaptationConfig> for ConfigRepr {
    fn from(c: AdaptationConfig) -> Self {
        ConfigRepr {
            word_length: c.word_length,
            registers: c.registers,
            selection_bits: c.selection_bits,
        }
    }
}

impl AdaptationConfig {
    /// `registers` holds `R_0..R_L`, so one more entry than the word length.
    pub fn new(word_length: u8, registers: Vec<u16>) -> Result<Self> {
        Self::with_selection_bits(word_length, registers, default_selection_bits())
    }

    pub fn with_selection_bits(
        word_length: u8,
        registers: Vec<u16>,
        selection_bits: u8,
    ) -> Result<Self> {
        if word_length == 0 {
            return Err(Error::InvalidArgument("word length must be positive".into()));
        }
        if registers.len() != word_length as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "need {} registers for word length {word_length}, got {}",
                word_length as usize + 1,
                registers.len()
            )));
        }
        if selection_bits == 0 || selection_bits > 16 {
            return Err(Error::InvalidArgument(format!(
                "selection width {selection_bits} outside 1..=16"
            )));
        }
        let limit = if selection_bits == 16 {
            u16::MAX
        } else {
            (1u16 << selection_bits) - 1
        };
        if let Some(&r) = registers.iter().find(|&&r| r > limit) {
            return Err(Error::InvalidArgument(format!(
                "register value {r} does not fit in {selection_bits} bits"
            )));
        }
        Ok(AdaptationConfig {
            word_length,
            registers,
            selection_bits,
        })
    }

    pub fn word_length(&self) -> u8 {
        self.word_length
    }

    pub fn selection_bits(&self) -> u8 {
        self.selection_bits
    }

    pub fn registers(&self) -> &[u16] {
        &self.registers
    }

    pub fn register(&self, i: u8) -> u16 {
        self.registers[i as usize]
    }
}

/// Two states: idle with the counter pinned at zero, or counting through a
/// word with the counter in `1..=L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsmState {
    Idle,
    Counting(u8),
}

impl FsmState {
    pub fn new() -> Self {
        FsmState::Idle
    }

    pub fn is_idle(self) -> bool {
        matches!(self, FsmState::Idle)
    }

    pub fn counter(self) -> u8 {
        match self {
            FsmState::Idle => 0,
            FsmState::Counting(i) => i,
        }
    }
}

impl Default for FsmState {
    fn default() -> Self {
        Self::new()
    }
}

/// One clock cycle of stimulus. The start signal is sampled only at negative
/// edges; its level in between has no effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StimulusCycle {
    pub cycle: u64,
    pub scl_negedge: bool,
    pub s_start: bool,
}

/// Advance the machine by one event and report the selection in force
/// afterwards. The selection output is combinational on the counter, so a
/// cycle without an edge re-reads the current register.
///
/// A start seen while counting is ignored until the machine returns to idle.
pub fn step(
    st: FsmState,
    cfg: &AdaptationConfig,
    scl_negedge: bool,
    s_start: bool,
) -> (FsmState, u16) {
    let next = if !scl_negedge {
        st
    } else {
        match st {
            FsmState::Idle if s_start => FsmState::Counting(1),
            FsmState::Idle => FsmState::Idle,
            FsmState::Counting(i) if i < cfg.word_length() => FsmState::Counting(i + 1),
            FsmState::Counting(_) => FsmState::Idle,
        }
    };
    (next, cfg.register(next.counter()))
}

/// Drive a whole transaction: one negative edge per cycle, with the start
/// signal raised for each queued word. A word starts only after the machine
/// has spent at least one full cycle back in idle, which frames every word's
/// `R_1..R_L` run with `R_0` on both sides.
///
/// Only the number of words matters for the selection trace; their bit
/// values ride on the data line, not through this module.
pub fn simulate_transaction(
    cfg: &AdaptationConfig,
    words: &[Word],
    cycles: usize,
) -> Result<Vec<u16>> {
    for w in words {
        if w.width() != cfg.word_length() {
            return Err(Error::WidthMismatch {
                expected: cfg.word_length(),
                actual: w.width(),
            });
        }
    }
    let mut st = FsmState::new();
    let mut idle_run = 0usize;
    let mut queued = words.len();
    let mut trace = Vec::with_capacity(cycles);
    for _ in 0..cycles {
        let start = st.is_idle() && idle_run >= 1 && queued > 0;
        let (next, sel) = step(st, cfg, true, start);
        if start {
            queued -= 1;
        }
        st = next;
        idle_run = if st.is_idle() { idle_run + 1 } else { 0 };
        trace.push(sel);
    }
    Ok(trace)
}

/// Apply a recorded stimulus line by line; returns one selection per line.
pub fn run_stimulus(cfg: &AdaptationConfig, stimulus: &[StimulusCycle]) -> Vec<u16> {
    let mut st = FsmState::new();
    stimulus
        .iter()
        .map(|s| {
            let (next, sel) = step(st, cfg, s.scl_negedge, s.s_start);
            st = next;
            sel
        })
        .collect()
}

/// Parse a stimulus file: one cycle per line, `<cycle> <scl_edge:0|1>
/// <start:0|1>` with an optional fourth selection column (present in trace
/// files, ignored on input). Blank lines and `#` comments are skipped.
pub fn parse_stimulus(text: &str) -> Result<Vec<StimulusCycle>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| {
            Error::InvalidArgument(format!("stimulus line {}: {what}", idx + 1))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(bad("expected 3 or 4 columns"));
        }
        let cycle: u64 = fields[0].parse().map_err(|_| bad("bad cycle number"))?;
        let flag = |s: &str, what: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad(what)),
        };
        out.push(StimulusCycle {
            cycle,
            scl_negedge: flag(fields[1], "edge flag must be 0 or 1")?,
            s_start: flag(fields[2], "start flag must be 0 or 1")?,
        });
    }
    Ok(out)
}

/// Render a trace file: the stimulus columns echoed back with the resulting
/// selection appended.
pub fn format_trace(cfg: &AdaptationConfig, stimulus: &[StimulusCycle]) -> String {
    let selections = run_stimulus(cfg, stimulus);
    let mut out = String::new();
    for (s, sel) in stimulus.iter().zip(&selections) {
        out.push_str(&format!(
            "{} {} {} {}\n",
            s.cycle,
            s.scl_negedge as u8,
            s.s_start as u8,
            sel
        ));
    }
    out
}
