//! Mermin chain on a shared GHZ state: two sequential Charlies, the first
//! measuring unsharply at λ1 = 0.74, the second sharply. Both stages
//! violate the biseparable bound 2√2, so both Charlies certify genuine
//! tripartite entanglement with the same Alice and Bob.

use seqwit::{mermin_chain, named_state, MeasurementPlan, StateKind, MERMIN_BOUND};

fn main() {
    let plan = MeasurementPlan::symmetric(&[0.74, 1.0]);
    let report = mermin_chain(&plan, &named_state(StateKind::Ghz)).unwrap();

    println!("Mermin chain, GHZ, lambdas = [0.74, 1.00], bound = {MERMIN_BOUND:.6}");
    for (m, (value, violated)) in report.values.iter().zip(&report.verdicts).enumerate() {
        println!(
            "  stage {}: M = {value:.6}  ({}, {:+.2}% vs bound)",
            m + 1,
            if *violated { "violated" } else { "not violated" },
            report.percent_violation(m),
        );
    }

    // a third symmetric stage cannot keep all three above the bound
    let plan3 = MeasurementPlan::symmetric(&[0.74, 0.8848, 1.0]);
    let report3 = mermin_chain(&plan3, &named_state(StateKind::Ghz)).unwrap();
    println!("with a third Charlie appended (lambda2 = 0.8848):");
    for (m, value) in report3.values.iter().enumerate() {
        println!("  stage {}: M = {value:.6}", m + 1);
    }
}
