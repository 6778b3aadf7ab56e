//! Sequential unsharp measurements on one qubit of a shared three-qubit
//! state, and how many consecutive observers can certify genuine tripartite
//! entanglement from their correlations.
//!
//! The model: Alice and Bob hold the first two qubits and measure sharply;
//! a line of Charlies each performs an unsharp (sharpness λ) measurement on
//! the third qubit, applies the Lüders state update, and passes the qubit
//! on. Certification is tested per stage with the Mermin and Uffink
//! inequalities or with state-tailored witness operators whose unsharp
//! expectations are affine in λ.
//!
//! Entry points:
//! - [`inequalities::mermin_chain`] and [`inequalities::uffink_chain`] give
//!   per-stage inequality values and violation verdicts,
//! - [`witness::build_witness`] and [`threshold::threshold_chain`] give
//!   witness expectations and the recursive minimal-sharpness table,
//! - [`optim::maximize`] searches measurement settings for the largest
//!   late-stage value under early-stage constraints,
//! - [`sequential::branch_oracle_correlation`] is a slow exhaustive oracle
//!   used to cross-check the channel-based evaluator.
//!
//! The `seqwit` binary wraps these in subcommands with JSON/CSV output; see
//! [`cli`].

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod optim;
pub mod quantum;
pub mod report;
pub mod sequential;
pub mod threshold;
pub mod witness;

pub use error::SeqwitError;
pub use inequalities::{mermin_chain, uffink_chain, MeasurementPlan, MERMIN_BOUND, UFFINK_BOUND};
pub use quantum::{named_state, Direction, StateKind, UnsharpMeasurement};
pub use sequential::{averaged_channel, chain_correlation, CharlieStage};
pub use threshold::{threshold_chain, ThresholdOptions, ThresholdTable};
pub use witness::{build_witness, unsharp_expectation, WitnessSpec};
