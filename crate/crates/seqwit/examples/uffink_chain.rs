//! Uffink chain on a shared GHZ state. The Uffink quantity is quadratic in
//! the correlators (bound 8); at the symmetric settings it equals the
//! square of the Mermin quantity, so the sharp single-stage value is 16.

use seqwit::{named_state, uffink_chain, MeasurementPlan, StateKind, UFFINK_BOUND};

fn main() {
    for lambdas in [vec![1.0], vec![0.7246, 1.0]] {
        let plan = MeasurementPlan::symmetric(&lambdas);
        let report = uffink_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        println!("Uffink chain, GHZ, lambdas = {lambdas:?}, bound = {UFFINK_BOUND}");
        for (m, (value, violated)) in report.values.iter().zip(&report.verdicts).enumerate() {
            println!(
                "  stage {}: U = {value:.6}  ({})",
                m + 1,
                if *violated { "violated" } else { "not violated" },
            );
        }
    }
}
