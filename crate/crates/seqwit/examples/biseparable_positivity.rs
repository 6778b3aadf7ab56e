//! Positivity fuzz: the unsharp witnesses must stay nonnegative in
//! expectation on every biseparable state for every sharpness. Samples
//! Haar-random product states across all three bipartitions and reports
//! the smallest expectation seen.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqwit::witness::{affine_coefficients, sample_biseparable_with, Bipartition};
use seqwit::{build_witness, StateKind};

fn main() {
    let samples = 2_000;
    let specs = [build_witness(StateKind::W), build_witness(StateKind::Ghz)];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut min_value = f64::INFINITY;
    for bp in Bipartition::ALL {
        for _ in 0..samples {
            let rho = sample_biseparable_with(&mut rng, bp);
            for spec in &specs {
                let aff = affine_coefficients(spec, &rho);
                for i in 1..=10 {
                    min_value = min_value.min(aff.at(i as f64 / 10.0));
                }
            }
        }
    }
    println!(
        "minimum Tr[W^lambda rho] over {} biseparable samples x 3 bipartitions x 2 witnesses: {min_value:.6e}",
        samples
    );
    assert!(min_value >= -1e-10);
    println!("no negative expectation found: both unsharp witnesses remain valid");
}
