//! Property-based differential test: the channel-composing correlator
//! evaluator and the explicit branch-enumerating oracle must agree on
//! arbitrary states, settings and sharpness chains.

use proptest::prelude::*;
use seqwit::sequential::branch_oracle_correlation;
use seqwit::{chain_correlation, named_state, CharlieStage, Direction, StateKind};
use std::f64::consts::PI;

fn direction() -> impl Strategy<Value = Direction> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(t, p)| Direction::new(t, p))
}

fn stage() -> impl Strategy<Value = CharlieStage> {
    (direction(), direction(), 0.05..=1.0f64)
        .prop_map(|(d0, d1, lam)| CharlieStage::uniform(&[d0, d1], lam).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluators_agree(
        ghz in any::<bool>(),
        stages in prop::collection::vec(stage(), 1..=4),
        a in direction(),
        b in direction(),
        m_index in any::<prop::sample::Index>(),
        setting in 0..2usize,
    ) {
        let kind = if ghz { StateKind::Ghz } else { StateKind::W };
        let initial = named_state(kind);
        let m = m_index.index(stages.len()) + 1;
        let fast = chain_correlation(&initial, &stages, m, &a, &b, setting).unwrap();
        let oracle = branch_oracle_correlation(&initial, &stages, m, &a, &b, setting).unwrap();
        prop_assert!((fast - oracle).abs() < 1e-10, "fast {fast} vs oracle {oracle}");
        prop_assert!(fast.abs() <= 1.0 + 1e-10);
    }

    #[test]
    fn correlators_bounded_and_lambda_scaled(
        stages in prop::collection::vec(stage(), 1..=3),
        a in direction(),
        b in direction(),
    ) {
        // final-stage correlation scales linearly with the last sharpness
        let initial = named_state(StateKind::Ghz);
        let m = stages.len();
        let lam = stages[m - 1].sharpness();
        let mut sharp_tail = stages.clone();
        let dirs: Vec<Direction> =
            stages[m - 1].settings().iter().map(|u| *u.direction()).collect();
        sharp_tail[m - 1] = CharlieStage::uniform(&dirs, 1.0).unwrap();
        let full = chain_correlation(&initial, &stages, m, &a, &b, 0).unwrap();
        let unit = chain_correlation(&initial, &sharp_tail, m, &a, &b, 0).unwrap();
        prop_assert!((full - lam * unit).abs() < 1e-10);
    }
}
