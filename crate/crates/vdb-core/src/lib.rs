//! Exact distortion analysis and channel adaptation for low-voltage serial links.
//!
//! A transmitted word of `L` bits may arrive with some bits flipped.  When the
//! word encodes an integer, what matters downstream is not how many bits
//! flipped but how far the received integer landed from the transmitted one.
//! This crate computes the full probability distribution of that integer
//! distortion for per-bit error channels, searches for the most aggressive
//! per-bit error probabilities whose distortion tail still meets a bound, and
//! models the I2C bus electronics (digitally controlled pull-ups) that realize
//! those probabilities, together with the small state machine that switches
//! pull-up strength on a per-bit schedule.

pub mod channel;
pub mod distortion;
pub mod error;
pub mod error_sets;
pub mod error_vector;
pub mod fsm;
pub mod i2c;
pub mod input;
pub mod optimizer;
pub mod word;

pub use channel::ChannelModel;
pub use distortion::{
    brute_force_oracle, brute_force_oracle_with_limit, distortion_pmf_enumerative,
    distortion_pmf_fast, error_vector_probability, monte_carlo_distortion,
    uniform_word_independent_pmf, DistortionDistribution,
};
pub use error::{Error, Result};
pub use error_sets::{build_error_counts, build_error_sets, ErrorSets, MATERIALIZATION_LIMIT};
pub use error_vector::ErrorVector;
pub use fsm::{AdaptationConfig, FsmState, StimulusCycle};
pub use i2c::{
    byte_error_profile, channel_from_profile, estimate_capacitance, estimate_resistances,
    measured_pull_up_ratio, power_estimate, steady_state_levels, BenchMeasurements,
    CircuitParams, DcpProfile, SteadyState,
};
pub use input::InputDistribution;
pub use optimizer::{
    adaptive_search_bit_level, adaptive_search_bit_level_with, average_benefit, benefit,
    exhaustive_search_bit_independent, generate_random_constraint, oracle_tail,
    satisfies_constraint, ConstraintTail, Neighborhood, ProbabilityVector, SearchResult,
};
pub use word::Word;

/// Largest word width supported anywhere in the crate.
pub const MAX_WIDTH: u8 = 16;
