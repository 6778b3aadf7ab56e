//! Cross-checks of simulated quantities against their closed forms:
//! the affine witness expectations on the target states and the two-stage
//! witness expectations after one averaged measurement.

use seqwit::witness::charlie2_closed_form;
use seqwit::{
    averaged_channel, build_witness, named_state, unsharp_expectation, CharlieStage, StateKind,
};

fn main() {
    let mut worst: f64 = 0.0;
    for kind in [StateKind::W, StateKind::Ghz] {
        let spec = build_witness(kind);
        let initial = named_state(kind);

        // stage 1: Tr[W^λ ρ] is affine in λ
        for i in 1..=10 {
            let lam = i as f64 / 10.0;
            let sim = unsharp_expectation(&spec, initial.density(), lam).unwrap();
            let closed = match kind {
                StateKind::W => (7.0 - 13.0 * lam) / 18.0,
                StateKind::Ghz => (1.0 - 3.0 * lam) / 4.0,
            };
            worst = worst.max((sim - closed).abs());
        }

        // stage 2: expectation after one averaged unsharp stage
        for i in 1..=10 {
            for j in 1..=10 {
                let (l1, l2) = (i as f64 / 10.0, j as f64 / 10.0);
                let stage = CharlieStage::uniform(spec.correlation_settings(), l1).unwrap();
                let evolved = averaged_channel(initial.density(), &stage);
                let sim = unsharp_expectation(&spec, &evolved, l2).unwrap();
                let closed = charlie2_closed_form(kind, l1, l2);
                worst = worst.max((sim - closed).abs());
            }
        }
        println!("{kind}: stage-1 and stage-2 closed forms agree (worst |diff| so far {worst:.2e})");
    }
    assert!(worst < 1e-10);
    println!("all closed-form checks within 1e-10");
}
