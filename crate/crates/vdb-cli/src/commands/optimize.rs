use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};
use vdb_core::optimizer::{
    adaptive_search_bit_level_with, exhaustive_search_bit_independent, SearchResult,
};

use crate::emit::{emit_curves, emit_json, Series};
use crate::scenario::{read_scenario, ConstraintSpec, InputSpec, SearchSpec};
use crate::Infeasible;

/// Search for the most aggressive per-bit error probabilities whose
/// distortion tail stays under a bound.
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

    /// Constraint tail: unconstrained, file:<path>, or generated
    /// (drawn from --seed).
    #[arg(long, default_value = "unconstrained", value_parser = ConstraintFlag::from_str)]
    constraint: ConstraintFlag,

    /// Seed for a generated constraint.
    #[arg(long)]
    seed: Option<u64>,

    /// Search mode: bit-independent, bit-level, or bit-level-symmetric.
    #[arg(long, default_value = "bit-level", value_parser = SearchFlag::from_str)]
    search: SearchFlag,

    /// Grid resolution exponent for the bit-independent search (step 2^-r).
    #[arg(long, default_value_t = 7)]
    resolution_log2: u8,

    /// Output directory for search_result.json and search_tails.csv.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone)]
enum ConstraintFlag {
    Unconstrained,
    File(PathBuf),
    Generated,
}

impl FromStr for ConstraintFlag {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unconstrained" => Ok(ConstraintFlag::Unconstrained),
            "generated" => Ok(ConstraintFlag::Generated),
            _ => s
                .strip_prefix("file:")
                .map(|p| ConstraintFlag::File(p.into()))
                .ok_or_else(|| {
                    anyhow!("constraint must be unconstrained, generated, or file:<path>")
                }),
        }
    }
}

#[derive(Clone, Copy)]
enum SearchFlag {
    BitIndependent,
    BitLevel,
    BitLevelSymmetric,
}

impl FromStr for SearchFlag {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit-independent" => Ok(SearchFlag::BitIndependent),
            "bit-level" => Ok(SearchFlag::BitLevel),
            "bit-level-symmetric" => Ok(SearchFlag::BitLevelSymmetric),
            _ => bail!("search must be bit-independent, bit-level, or bit-level-symmetric"),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct Scenario {
    pub width: u8,
    pub input: InputSpec,
    pub constraint: ConstraintSpec,
    pub search: SearchSpec,
}

#[derive(Serialize)]
struct ResultDoc<'a> {
    scenario: &'a Scenario,
    constraint_tail: &'a [f64],
    #[serde(flatten)]
    result: &'a SearchResult,
    induced_tail: &'a [f64],
}

impl Args {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            return read_scenario(path);
        }
        let constraint = match (&self.constraint, self.seed) {
            (ConstraintFlag::Unconstrained, _) => ConstraintSpec::Unconstrained,
            (ConstraintFlag::File(p), _) => ConstraintSpec::File { path: p.clone() },
            (ConstraintFlag::Generated, Some(seed)) => ConstraintSpec::Generated { seed },
            (ConstraintFlag::Generated, None) => {
                bail!("--constraint generated is stochastic and requires --seed")
            }
        };
        let search = match self.search {
            SearchFlag::BitIndependent => SearchSpec::BitIndependent {
                resolution_log2: self.resolution_log2,
            },
            SearchFlag::BitLevel => SearchSpec::BitLevel {
                symmetric_neighborhood: false,
            },
            SearchFlag::BitLevelSymmetric => SearchSpec::BitLevel {
                symmetric_neighborhood: true,
            },
        };
        Ok(Scenario {
            width: self.width,
            input: self.input.clone().with_offset(self.offset),
            constraint,
            search,
        })
    }
}

pub fn run(args: &Args) -> Result<()> {
    let scenario = args.scenario()?;
    let input = scenario.input.resolve(scenario.width)?;
    let constraint = scenario.constraint.resolve(scenario.width)?;

    let result = match scenario.search {
        SearchSpec::BitIndependent { resolution_log2 } => {
            exhaustive_search_bit_independent(&input, &constraint, resolution_log2)?
        }
        search @ SearchSpec::BitLevel { .. } => adaptive_search_bit_level_with(
            &input,
            &constraint,
            search.neighborhood().expect("bit-level search"),
        )?,
    };

    emit_json(
        &args.out,
        "search_result",
        &ResultDoc {
            scenario: &scenario,
            constraint_tail: constraint.values(),
            result: &result,
            induced_tail: result.induced.tail(),
        },
    )?;
    let series = [
        Series::from_values("constraint", constraint.values()),
        Series::from_values("induced_tail", result.induced.tail()),
        Series::from_values("induced_pmf", result.induced.pmf()),
    ];
    let (csv, _) = emit_curves(&args.out, "search_tails", &scenario, &series)?;
    println!(
        "optimize: benefit {:.6} after {} evaluations, wrote {}",
        result.benefit,
        result.evaluations,
        csv.display()
    );
    if !result.feasible {
        return Err(anyhow::Error::new(Infeasible));
    }
    Ok(())
}
