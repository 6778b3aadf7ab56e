//! Differential check of the two correlator evaluators: the fast path
//! precomposes averaged channels, the oracle enumerates every prior
//! setting and outcome branch explicitly. They must agree to 1e-10.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqwit::sequential::branch_oracle_correlation;
use seqwit::{chain_correlation, named_state, CharlieStage, Direction, StateKind};
use std::f64::consts::PI;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut random_dir =
        |rng: &mut ChaCha8Rng| Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
    let mut max_diff: f64 = 0.0;
    for _ in 0..100 {
        let kind = if rng.gen::<bool>() { StateKind::Ghz } else { StateKind::W };
        let initial = named_state(kind);
        let n = rng.gen_range(1..=4usize);
        let stages: Vec<CharlieStage> = (0..n)
            .map(|_| {
                let d0 = random_dir(&mut rng);
                let d1 = random_dir(&mut rng);
                CharlieStage::uniform(&[d0, d1], rng.gen_range(0.05..=1.0)).unwrap()
            })
            .collect();
        let (a, b) = (random_dir(&mut rng), random_dir(&mut rng));
        let m = rng.gen_range(1..=n);
        let setting = rng.gen_range(0..2usize);
        let fast = chain_correlation(&initial, &stages, m, &a, &b, setting).unwrap();
        let oracle = branch_oracle_correlation(&initial, &stages, m, &a, &b, setting).unwrap();
        max_diff = max_diff.max((fast - oracle).abs());
    }
    println!("max |fast - oracle| over 100 random instances: {max_diff:.3e}");
    assert!(max_diff < 1e-10);
}
