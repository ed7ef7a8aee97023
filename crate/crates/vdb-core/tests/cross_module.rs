//! Identities that tie the modules together: generated bounds against the
//! channels that attain them, trace-driven pull-up schedules against the bus
//! model, and search results against independent recomputation.

use vdb_core::fsm;
use vdb_core::optimizer::{
    adaptive_search_bit_level, exhaustive_search_bit_independent, generate_random_constraint,
    oracle_tail, satisfies_constraint, ConstraintTail, CONSTRAINT_SLACK,
};
use vdb_core::{
    brute_force_oracle, channel_from_profile, distortion_pmf_fast, AdaptationConfig,
    ChannelModel, CircuitParams, DcpProfile, InputDistribution, Word,
};

/// The generated bound is by construction the tail of sending the all-zero
/// word through upward flips with the drawn probabilities.
#[test]
fn generated_constraint_is_a_point_mass_tail() {
    for seed in 0..20u64 {
        let (t, p_rand) = generate_random_constraint(8, seed).unwrap();
        let ch = ChannelModel::word_independent(vec![0.0; 8], p_rand).unwrap();
        let input = InputDistribution::point_mass(8, 0).unwrap();
        let d = distortion_pmf_fast(&ch, &input).unwrap();
        for (m, (&got, &bound)) in d.tail().iter().zip(t.values()).enumerate() {
            assert!(
                (got - bound).abs() < 1e-12,
                "seed {seed}, m = {m}: {got} vs {bound}"
            );
        }
    }
}

/// Running the drawn vector through both polarities keeps the tail under the
/// generated bound: downward flips can only cancel upward ones.
#[test]
fn oracle_channel_stays_under_generated_bound_across_seeds() {
    let input = InputDistribution::uniform(8).unwrap();
    for seed in 0..100u64 {
        let (t, p_rand) = generate_random_constraint(8, seed).unwrap();
        let d = oracle_tail(&p_rand, &input).unwrap();
        assert!(
            satisfies_constraint(&d, &t).unwrap(),
            "seed {seed}: oracle tail escaped the bound"
        );
        for (m, (&got, &bound)) in d.tail().iter().zip(t.values()).enumerate() {
            assert!(got <= bound + CONSTRAINT_SLACK, "seed {seed}, m = {m}");
        }
    }
}

/// A selection trace driven through the adaptation machine, cut into
/// per-word pull-up schedules, must induce the same channel as building the
/// schedule directly.
#[test]
fn fsm_trace_feeds_the_bus_model() {
    let params = CircuitParams::warp_100k();
    let taps: [u16; 8] = [8, 9, 10, 11, 12, 10, 9, 8];
    let nominal = 0u16;
    let mut registers = vec![nominal];
    registers.extend_from_slice(&taps);
    let cfg = AdaptationConfig::new(8, registers).unwrap();

    let words = [Word::new(0xA5, 8).unwrap(), Word::new(0x3C, 8).unwrap()];
    let trace = fsm::simulate_transaction(&cfg, &words, 1 + 2 * 9).unwrap();

    // Word w occupies cycles 1 + w*9 .. 9 + w*9, framed by the default tap.
    for w in 0..words.len() {
        let base = 1 + w * 9;
        assert_eq!(trace[base - 1], nominal);
        let mut settings = [0usize; 8];
        for (slot, s) in settings.iter_mut().enumerate() {
            *s = trace[base + slot] as usize;
        }
        let from_trace = DcpProfile {
            settings,
            nominal: nominal as usize,
        };
        let direct = DcpProfile {
            settings: taps.map(|t| t as usize),
            nominal: nominal as usize,
        };
        assert_eq!(from_trace, direct);

        let ch_a = channel_from_profile(&from_trace, &params).unwrap();
        let ch_b = channel_from_profile(&direct, &params).unwrap();
        for x in 0..256u16 {
            for i in 0..8u8 {
                assert_eq!(ch_a.p_down(x, i), ch_b.p_down(x, i));
                assert_eq!(ch_a.p_up(x, i), 0.0);
            }
        }
    }
}

/// Search output re-verified through the slow quadratic oracle: the induced
/// distribution is right and the constraint really holds.
#[test]
fn search_results_survive_independent_recomputation() {
    let input = InputDistribution::uniform(4).unwrap();
    for seed in [3u64, 7, 21] {
        let (t, _) = generate_random_constraint(4, seed).unwrap();
        let r = adaptive_search_bit_level(&input, &t).unwrap();
        assert!(r.feasible);
        let slow = brute_force_oracle(&r.best.as_channel(), &input).unwrap();
        for (m, (&a, &b)) in slow.pmf().iter().zip(r.induced.pmf()).enumerate() {
            assert!((a - b).abs() < 1e-12, "seed {seed}, m = {m}: {a} vs {b}");
        }
        assert!(satisfies_constraint(&slow, &t).unwrap());
    }
}

/// End to end: a bound taken from a bus-model tail admits a nonzero
/// word-independent operating point.
#[test]
fn bus_model_tail_leaves_room_for_adaptation() {
    let params = CircuitParams::warp_100k();
    let input = InputDistribution::uniform(8).unwrap();
    let ch = channel_from_profile(&DcpProfile::uniform(10, 0), &params).unwrap();
    let bound_tail = distortion_pmf_fast(&ch, &input).unwrap().tail().to_vec();
    let t = ConstraintTail::new(8, bound_tail).unwrap();
    let r = exhaustive_search_bit_independent(&input, &t, 4).unwrap();
    assert!(r.feasible);
    assert!(r.benefit > 0.0, "expected a nonzero feasible pair");
    let check = brute_force_oracle(&r.best.as_channel(), &input).unwrap();
    assert!(satisfies_constraint(&check, &t).unwrap());
}
