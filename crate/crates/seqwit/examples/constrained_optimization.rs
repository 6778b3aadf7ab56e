//! Constrained search for the largest stage-3 Mermin value when the first
//! two Charlies must stay above a violation level. With both earlier
//! stages pinned at 2.96 the best stage-3 value stays below the bound
//! 2√2, so a third Charlie cannot certify genuine entanglement this way.

use seqwit::optim::{maximize, ObjectiveKind, OptimizationProblem};
use seqwit::{StateKind, MERMIN_BOUND};

fn main() {
    let problem = OptimizationProblem {
        objective: ObjectiveKind::Mermin,
        target_stage: 3,
        constraints: vec![(1, 2.96), (2, 2.96)],
        initial_state: StateKind::Ghz,
    };
    // modest restart count for a quick demo; the acceptance suite uses 100
    let result = maximize(&problem, 16, 7).unwrap();
    println!(
        "best M3 with M1, M2 >= 2.96: {:.6} (bound {MERMIN_BOUND:.6}, converged: {})",
        result.best_value, result.converged
    );
    println!("constraint residuals: {:?}", result.constraint_residuals);
    assert!(result.best_value < MERMIN_BOUND);
}
