//! Recursive minimal-sharpness chains for the W and GHZ witness protocols:
//! how many sequential Charlies can certify genuine entanglement when each
//! earlier Charlie measured exactly at their own minimum.

use seqwit::{threshold_chain, StateKind, ThresholdOptions};

fn main() {
    for kind in [StateKind::W, StateKind::Ghz] {
        let table = threshold_chain(kind, ThresholdOptions::default());
        println!(
            "{} witness: {} sequential Charlies can detect genuine entanglement",
            kind, table.chain_length
        );
        for (m, min) in table.minima.iter().enumerate() {
            println!("  Charlie {:2}: lambda_min = {min:.6}", m + 1);
        }
        println!("  stage {}: no permissible sharpness\n", table.chain_length + 1);
    }
}
