//! Property tests for the table algebra and the analytic engines.

use std::f64::consts::PI;

use ewf_core::pilotwave::pm_joint;
use ewf_core::quantum::{ghz_correlator, quantum_correlator_set};
use ewf_core::{Angle, JointTable, Settings};
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = JointTable> {
    prop::collection::vec(0.0f64..1.0, 16)
        .prop_filter("mass must be positive", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|weights| {
            let total: f64 = weights.iter().sum();
            let probs = weights.iter().map(|w| w / total).collect();
            JointTable::new(vec!["A1", "B1", "A2", "B2"], probs).unwrap()
        })
}

fn angle_strategy() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

proptest! {
    #[test]
    fn expectation_is_bilinear_in_table_mixing(
        first in table_strategy(),
        second in table_strategy(),
        lambda in 0.0f64..=1.0,
    ) {
        let mixed = JointTable::mix(&first, &second, lambda).unwrap();
        for (a, b) in [("A1", "B1"), ("B1", "A2"), ("A2", "B2"), ("A1", "B2")] {
            let direct = mixed.expectation(a, b).unwrap();
            let combined = lambda * first.expectation(a, b).unwrap()
                + (1.0 - lambda) * second.expectation(a, b).unwrap();
            prop_assert!((direct - combined).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_preserves_pair_expectations(table in table_strategy()) {
        for (a, b) in [("A1", "B1"), ("B1", "B2"), ("A2", "B2"), ("A1", "B2")] {
            let marginal = table.marginal(&[a, b]).unwrap();
            let via_marginal = marginal.expectation(a, b).unwrap();
            let direct = table.expectation(a, b).unwrap();
            prop_assert!((via_marginal - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals_stay_normalized_and_nonnegative(table in table_strategy()) {
        for keep in [&["A1"][..], &["B1", "B2"], &["A1", "B1", "A2"]] {
            let marginal = table.marginal(keep).unwrap();
            let total: f64 = marginal.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(marginal.probs().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn chain_tables_are_normalized_at_any_settings(
        a1 in angle_strategy(),
        b1 in angle_strategy(),
        a2 in angle_strategy(),
        b2 in angle_strategy(),
    ) {
        let s = Settings::new(a1, b1, a2, b2).unwrap();
        for table in [
            pm_joint(&s).unwrap(),
            ewf_core::collapse::collapse_chain_joint(&s).unwrap(),
        ] {
            let total: f64 = table.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(table.probs().iter().all(|&p| p >= 0.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn ghz_contraction_matches_the_closed_form(
        t1 in angle_strategy(),
        t2 in angle_strategy(),
        t3 in angle_strategy(),
    ) {
        let contracted = ghz_correlator(
            Angle::new(t1).unwrap(),
            Angle::new(t2).unwrap(),
            Angle::new(t3).unwrap(),
        );
        prop_assert!((contracted - (t1 + t2 + t3).cos()).abs() < 1e-12);
    }

    #[test]
    fn quantum_set_is_invariant_under_global_rotation(
        a1 in angle_strategy(),
        b1 in angle_strategy(),
        a2 in angle_strategy(),
        b2 in angle_strategy(),
        offset in -4.0 * PI..4.0 * PI,
    ) {
        let base = quantum_correlator_set(&Settings::new(a1, b1, a2, b2).unwrap()).unwrap();
        let rotated = quantum_correlator_set(
            &Settings::new(a1 + offset, b1 + offset, a2 + offset, b2 + offset).unwrap(),
        )
        .unwrap();
        for (x, y) in base.cross().into_iter().zip(rotated.cross()) {
            prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }
}
