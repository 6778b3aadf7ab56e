//! Recursive chain of minimal sharpness values for the witness protocols:
//! each stage is evolved at the previous minima and the zero crossing of
//! the affine witness expectation gives the next minimum.

use serde::{Deserialize, Serialize};

use crate::error::SeqwitError;
use crate::linalg::ComplexMatrix;
use crate::quantum::{named_state, StateKind};
use crate::sequential::{averaged_channel, CharlieStage};
use crate::witness::{affine_coefficients, build_witness, WitnessSpec};

/// Ordered minimal sharpness values with the chain-termination index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub witness_kind: StateKind,
    pub minima: Vec<f64>,
    pub chain_length: usize,
    /// Sharpness convention under which the minima were computed.
    pub convention: String,
}

/// Options for the threshold iteration; the default follows the convention
/// of pinning every earlier sharpness exactly at its minimum.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdOptions {
    /// Stop once λ_m^min reaches this cap (normally 1.0).
    pub lambda_cap: f64,
    /// Offset added to each minimum before evolving to the next stage, for
    /// sensitivity exploration. Zero reproduces the published convention.
    pub epsilon: f64,
    /// Hard stop on the number of stages explored.
    pub max_stages: usize,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            lambda_cap: 1.0,
            epsilon: 0.0,
            max_stages: 64,
        }
    }
}

fn next_state(
    spec: &WitnessSpec,
    rho: &ComplexMatrix,
    lambda: f64,
) -> Result<ComplexMatrix, SeqwitError> {
    let stage = CharlieStage::uniform(spec.correlation_settings(), lambda)?;
    Ok(averaged_channel(rho, &stage))
}

/// Iterate λ_m^min = alpha/beta, evolving at each minimum, until the root
/// leaves (0, cap) or the slope turns non-positive.
pub fn threshold_chain(kind: StateKind, opts: ThresholdOptions) -> ThresholdTable {
    let spec = build_witness(kind);
    threshold_chain_from(&spec, named_state(kind).density().clone(), opts)
}

/// Same iteration from an arbitrary initial state (diagnostic mode).
pub fn threshold_chain_from(
    spec: &WitnessSpec,
    initial: ComplexMatrix,
    opts: ThresholdOptions,
) -> ThresholdTable {
    let mut minima = Vec::new();
    let mut rho = initial;
    for _stage in 0..opts.max_stages {
        let aff = affine_coefficients(spec, &rho);
        if aff.beta <= 0.0 {
            // expectation cannot become negative for any λ
            break;
        }
        let root = aff.root();
        if !(root > 0.0 && root < opts.lambda_cap) {
            break;
        }
        minima.push(root);
        let evolve_at = (root + opts.epsilon).min(1.0);
        rho = match next_state(spec, &rho, evolve_at) {
            Ok(r) => r,
            Err(_) => break,
        };
    }
    let chain_length = minima.len();
    debug_assert!(minima.windows(2).all(|w| w[0] < w[1]));
    ThresholdTable {
        witness_kind: spec.kind(),
        minima,
        chain_length,
        convention: format!(
            "lambda_i = lambda_i^min + {:.3} for all i < m",
            opts.epsilon
        ),
    }
}
