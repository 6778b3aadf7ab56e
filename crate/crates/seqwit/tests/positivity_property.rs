//! Property-based positivity of the unsharp witnesses: expectations on
//! random biseparable product states, and mixtures of them, must never be
//! negative for any sharpness.

use proptest::prelude::*;
use seqwit::witness::{affine_coefficients, sample_biseparable, Bipartition};
use seqwit::{build_witness, StateKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn biseparable_expectations_nonnegative(
        seed_a in any::<u64>(),
        seed_b in any::<u64>(),
        bp_a in 0..3usize,
        bp_b in 0..3usize,
        mix in 0.0..=1.0f64,
        lambda in 0.01..=1.0f64,
    ) {
        let rho_a = sample_biseparable(Bipartition::ALL[bp_a], seed_a);
        let rho_b = sample_biseparable(Bipartition::ALL[bp_b], seed_b);
        // convex mixtures across different bipartitions are still biseparable
        let mixed = &rho_a.scale_re(mix) + &rho_b.scale_re(1.0 - mix);
        for kind in [StateKind::W, StateKind::Ghz] {
            let spec = build_witness(kind);
            for rho in [&rho_a, &rho_b, &mixed] {
                let v = affine_coefficients(&spec, rho).at(lambda);
                prop_assert!(v >= -1e-10, "{kind:?} expectation {v}");
            }
        }
    }
}
