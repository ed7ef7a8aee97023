//! Structural properties that must hold for every channel and input, checked
//! over randomized instances.

use proptest::prelude::*;
use vdb_core::{
    distortion_pmf_fast, satisfies_constraint, uniform_word_independent_pmf, ChannelModel,
    ErrorVector, InputDistribution,
};
use vdb_core::optimizer::ConstraintTail;

fn probs(width: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u32..=1000).prop_map(|k| k as f64 / 1000.0), width)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pmf_normalized_and_tail_consistent(
        width in 1u8..=6,
        seed_down in probs(6),
        seed_up in probs(6),
    ) {
        let w = width as usize;
        let ch = ChannelModel::word_independent(
            seed_down[..w].to_vec(),
            seed_up[..w].to_vec(),
        ).unwrap();
        let input = InputDistribution::uniform(width).unwrap();
        let d = distortion_pmf_fast(&ch, &input).unwrap();
        let total: f64 = d.pmf().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(d.pmf().iter().all(|&p| (0.0..=1.0 + 1e-12).contains(&p)));
        // Suffix sums: non-increasing, exact zero at the top magnitude.
        for m in 0..d.tail().len() - 1 {
            prop_assert!(d.tail()[m] >= d.tail()[m + 1]);
            prop_assert!((d.tail()[m] - d.tail()[m + 1] - d.pmf()[m + 1]).abs() < 1e-15);
        }
        prop_assert_eq!(*d.tail().last().unwrap(), 0.0);
    }

    #[test]
    fn downward_only_errors_never_exceed_sent_value(
        width in 1u8..=6,
        p in probs(6),
        x_raw in any::<u16>(),
    ) {
        let w = width as usize;
        let x = x_raw & ((1u16 << width) - 1);
        let ch = ChannelModel::word_independent(p[..w].to_vec(), vec![0.0; w]).unwrap();
        let input = InputDistribution::point_mass(width, x).unwrap();
        let d = distortion_pmf_fast(&ch, &input).unwrap();
        for m in (x as usize + 1)..d.pmf().len() {
            prop_assert_eq!(d.pmf()[m], 0.0);
        }
    }

    #[test]
    fn upward_only_errors_bounded_by_headroom(
        width in 1u8..=6,
        p in probs(6),
        x_raw in any::<u16>(),
    ) {
        let w = width as usize;
        let top = (1u16 << width) - 1;
        let x = x_raw & top;
        let ch = ChannelModel::word_independent(vec![0.0; w], p[..w].to_vec()).unwrap();
        let input = InputDistribution::point_mass(width, x).unwrap();
        let d = distortion_pmf_fast(&ch, &input).unwrap();
        for m in ((top - x) as usize + 1)..d.pmf().len() {
            prop_assert_eq!(d.pmf()[m], 0.0);
        }
    }

    #[test]
    fn own_tail_is_always_a_satisfiable_bound(
        width in 1u8..=6,
        seed_down in probs(6),
        seed_up in probs(6),
    ) {
        let w = width as usize;
        let d = uniform_word_independent_pmf(&seed_down[..w], &seed_up[..w]).unwrap();
        let bound = ConstraintTail::new(width, d.tail().to_vec()).unwrap();
        prop_assert!(satisfies_constraint(&d, &bound).unwrap());
    }

    #[test]
    fn compatible_word_count_follows_support(
        width in 2u8..=8,
        bit_a in 0u8..8,
        bit_b in 0u8..8,
    ) {
        let bit_a = bit_a % width;
        let bit_b = bit_b % width;
        let single = ErrorVector::single(width, bit_a, -1).unwrap();
        prop_assert_eq!(
            single.compatible_words().count(),
            1usize << (width - 1)
        );
        if bit_a != bit_b {
            let pair = single
                .combine(&ErrorVector::single(width, bit_b, 1).unwrap())
                .unwrap();
            prop_assert_eq!(pair.compatible_words().count(), 1usize << (width - 2));
            prop_assert_eq!(pair.magnitude(), pair.signed_distortion().unsigned_abs());
        }
    }
}

/// Tail curves for the symmetric channel family rise pointwise with the
/// flip probability on the diagonal p_down = p_up = q.
#[test]
fn symmetric_noise_grid_orders_tails() {
    let mut prev: Option<Vec<f64>> = None;
    for k in 0..=4 {
        let q = k as f64 / 8.0;
        let d = uniform_word_independent_pmf(&[q; 8], &[q; 8]).unwrap();
        if let Some(prev) = &prev {
            for (m, (lo, hi)) in prev.iter().zip(d.tail()).enumerate() {
                assert!(
                    hi >= lo,
                    "q = {q}, m = {m}: tail fell from {lo} to {hi}"
                );
            }
        }
        prev = Some(d.tail().to_vec());
    }
}
