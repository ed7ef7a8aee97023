use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use vdb_core::fsm::{format_trace, parse_stimulus, step, FsmState, StimulusCycle};
use vdb_core::AdaptationConfig;

use crate::emit::emit_text;
use crate::scenario::read_scenario;

/// Selection trace of the pull-up switching machine, from a recorded
/// stimulus file or a synthesized back-to-back transaction.
#[derive(clap::Args)]
pub struct Args {
    /// Scenario JSON file; replaces the individual scenario flags.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Bits per word.
    #[arg(long, default_value_t = 8)]
    word_length: u8,

    /// Register contents R_0..R_L, one more entry than the word length.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8")]
    registers: Vec<u16>,

    /// Width of the selection output in bits.
    #[arg(long, default_value_t = 8)]
    selection_bits: u8,

    /// Stimulus file: one cycle per line, `<cycle> <edge> <start>`.
    #[arg(long, conflicts_with_all = ["words", "cycles"])]
    stimulus: Option<PathBuf>,

    /// Synthesize this many back-to-back words instead.
    #[arg(long)]
    words: Option<u64>,

    /// Cycle count for the synthesized stimulus (default: enough for the
    /// words plus one trailing idle cycle each).
    #[arg(long, requires = "words")]
    cycles: Option<u64>,

    /// Output directory for fsm_trace.txt.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StimulusSpec {
    File { path: PathBuf },
    Synthesized { words: u64, cycles: u64 },
}

#[derive(Serialize, Deserialize)]
pub struct Scenario {
    pub word_length: u8,
    pub registers: Vec<u16>,
    pub selection_bits: u8,
    pub stimulus: StimulusSpec,
}

impl Args {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            return read_scenario(path);
        }
        let stimulus = match (&self.stimulus, self.words) {
            (Some(path), _) => StimulusSpec::File { path: path.clone() },
            (None, Some(words)) => StimulusSpec::Synthesized {
                words,
                cycles: self
                    .cycles
                    .unwrap_or(words * (self.word_length as u64 + 1) + 1),
            },
            (None, None) => bail!("need either --stimulus <file> or --words <count>"),
        };
        Ok(Scenario {
            word_length: self.word_length,
            registers: self.registers.clone(),
            selection_bits: self.selection_bits,
            stimulus,
        })
    }
}

/// One negative edge per cycle; a word starts only after a full idle cycle,
/// which frames every word with the nominal selection on both sides.
fn synth_stimulus(cfg: &AdaptationConfig, words: u64, cycles: u64) -> Vec<StimulusCycle> {
    let mut st = FsmState::new();
    let mut idle_run = 0u64;
    let mut queued = words;
    let mut out = Vec::with_capacity(cycles as usize);
    for cycle in 0..cycles {
        let s_start = st.is_idle() && idle_run >= 1 && queued > 0;
        out.push(StimulusCycle {
            cycle,
            scl_negedge: true,
            s_start,
        });
        let (next, _) = step(st, cfg, true, s_start);
        if s_start {
            queued -= 1;
        }
        st = next;
        idle_run = if st.is_idle() { idle_run + 1 } else { 0 };
    }
    out
}

pub fn run(args: &Args) -> Result<()> {
    let scenario = args.scenario()?;
    let cfg = AdaptationConfig::with_selection_bits(
        scenario.word_length,
        scenario.registers.clone(),
        scenario.selection_bits,
    )?;
    let stimulus = match &scenario.stimulus {
        StimulusSpec::File { path } => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading stimulus from {}", path.display()))?;
            parse_stimulus(&text)?
        }
        StimulusSpec::Synthesized { words, cycles } => synth_stimulus(&cfg, *words, *cycles),
    };

    let mut text = format!(
        "# scenario: {}\n# columns: cycle scl_negedge s_start selection\n",
        serde_json::to_string(&scenario)?
    );
    text.push_str(&format_trace(&cfg, &stimulus));
    let path = emit_text(&args.out, "fsm_trace.txt", &text)?;
    println!(
        "fsm-trace: {} cycles, word length {}, wrote {}",
        stimulus.len(),
        scenario.word_length,
        path.display()
    );
    Ok(())
}
