//! Evolution of the shared tripartite state through a chain of unsharp
//! measurements on the third qubit, and the (setting-averaged) three-party
//! correlation functions at every stage.
//!
//! Two interchangeable strategies are provided: [`chain_correlation`]
//! evolves the state through precomposed averaged channels, while
//! [`branch_oracle_correlation`] enumerates every prior setting and outcome
//! explicitly. Their agreement is the core differential invariant of the
//! simulation.

use crate::error::SeqwitError;
use crate::linalg::{kron3, ComplexMatrix};
use crate::quantum::{observable, sqrt_effect, Direction, NamedState, Outcome, UnsharpMeasurement};

/// Cap on the number of enumerated branches in the oracle path.
pub const BRANCH_CAP: u64 = 1_000_000;

/// One sequential observer: a set of equally-sharp measurement settings and
/// the probabilities with which they are chosen.
///
/// Inequality protocols use two settings; witness protocols use four or
/// five. Weights are stored explicitly so the unbiased-input assumption is
/// testable, but the shipped protocols always use uniform weights.
#[derive(Debug, Clone)]
pub struct CharlieStage {
    settings: Vec<UnsharpMeasurement>,
    weights: Vec<f64>,
}

impl CharlieStage {
    /// Uniform-weight stage over the given directions, all at sharpness λ.
    pub fn uniform(directions: &[Direction], sharpness: f64) -> Result<Self, SeqwitError> {
        let settings = directions
            .iter()
            .map(|d| UnsharpMeasurement::new(*d, sharpness))
            .collect::<Result<Vec<_>, _>>()?;
        let n = settings.len();
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            settings,
        })
    }

    pub fn settings(&self) -> &[UnsharpMeasurement] {
        &self.settings
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sharpness(&self) -> f64 {
        self.settings[0].sharpness()
    }
}

/// Extend a 2x2 Charlie-side operator to the full space: I ⊗ I ⊗ op.
fn lift_c(op: &ComplexMatrix) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    kron3(&i2, &i2, op)
}

/// Unnormalized Lüders update (I⊗I⊗√E) ρ (I⊗I⊗√E) for one outcome of an
/// unsharp measurement on qubit C. The trace of the result is the outcome
/// probability.
pub fn luders_map(
    rho: &ComplexMatrix,
    u: &UnsharpMeasurement,
    outcome: Outcome,
) -> ComplexMatrix {
    let k = lift_c(&sqrt_effect(u, outcome));
    &(&k * rho) * &k
}

/// Outcome-summed, setting-averaged Lüders channel of one stage.
/// Trace-preserving and positivity-preserving.
pub fn averaged_channel(rho: &ComplexMatrix, stage: &CharlieStage) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(8, 8);
    for (u, w) in stage.settings().iter().zip(stage.weights()) {
        for o in Outcome::BOTH {
            out = &out + &luders_map(rho, u, o).scale_re(*w);
        }
    }
    out
}

/// Three-party correlation λ_c · Tr[ρ (n_a·σ ⊗ n_b·σ ⊗ n_c·σ)].
///
/// Alice's and Bob's projective measurements appear only inside the trace;
/// they never update the state.
pub fn correlation(
    rho: &ComplexMatrix,
    a: &Direction,
    b: &Direction,
    c: &UnsharpMeasurement,
) -> f64 {
    let obs = kron3(&observable(a), &observable(b), &observable(c.direction()));
    c.sharpness() * rho.trace_product(&obs).re
}

/// States handed to each Charlie: element m is the averaged state after
/// stages 1..=m (element 0 is the initial state). Computed once per chain
/// so that repeated stage evaluations reuse the prefix.
pub fn evolve_prefix(initial: &NamedState, stages: &[CharlieStage]) -> Vec<ComplexMatrix> {
    let mut states = Vec::with_capacity(stages.len() + 1);
    states.push(initial.density().clone());
    for stage in stages {
        let next = averaged_channel(states.last().unwrap(), stage);
        states.push(next);
    }
    states
}

fn check_stage(m: usize, stages: &[CharlieStage]) -> Result<(), SeqwitError> {
    if m == 0 || m > stages.len() {
        return Err(SeqwitError::StageOutOfRange {
            index: m,
            stages: stages.len(),
        });
    }
    Ok(())
}

/// Stage-m averaged correlation: evolve through stages 1..m−1 via the
/// averaged channel, then correlate with stage m's chosen setting.
/// `m` is 1-based; `c_setting` indexes stage m's settings.
pub fn chain_correlation(
    initial: &NamedState,
    stages: &[CharlieStage],
    m: usize,
    a: &Direction,
    b: &Direction,
    c_setting: usize,
) -> Result<f64, SeqwitError> {
    check_stage(m, stages)?;
    let states = evolve_prefix(initial, &stages[..m - 1]);
    Ok(correlation(
        states.last().unwrap(),
        a,
        b,
        &stages[m - 1].settings()[c_setting],
    ))
}

/// Independent oracle for [`chain_correlation`]: explicit enumeration of
/// every prior setting tuple and outcome sequence, keeping unnormalized
/// branch states and summing at the end. Never calls `averaged_channel`.
pub fn branch_oracle_correlation(
    initial: &NamedState,
    stages: &[CharlieStage],
    m: usize,
    a: &Direction,
    b: &Direction,
    c_setting: usize,
) -> Result<f64, SeqwitError> {
    check_stage(m, stages)?;
    let prior = &stages[..m - 1];
    let mut branches: u64 = 1;
    for s in prior {
        branches = branches.saturating_mul(s.settings().len() as u64 * 2);
        if branches > BRANCH_CAP {
            return Err(SeqwitError::EnumerationTooLarge {
                branches,
                cap: BRANCH_CAP,
            });
        }
    }

    let mut summed = ComplexMatrix::zeros(8, 8);
    let mut stack: Vec<(usize, ComplexMatrix, f64)> = vec![(0, initial.density().clone(), 1.0)];
    while let Some((depth, rho, weight)) = stack.pop() {
        if depth == prior.len() {
            summed = &summed + &rho.scale_re(weight);
            continue;
        }
        let stage = &prior[depth];
        for (u, w) in stage.settings().iter().zip(stage.weights()) {
            for o in Outcome::BOTH {
                stack.push((depth + 1, luders_map(&rho, u, o), weight * w));
            }
        }
    }

    Ok(correlation(
        &summed,
        a,
        b,
        &stages[m - 1].settings()[c_setting],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eigenvalue;
    use crate::quantum::{named_state, StateKind};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn xy_stage(lambda: f64) -> CharlieStage {
        CharlieStage::uniform(&[Direction::Y, Direction::X], lambda).unwrap()
    }

    fn i8_over_8() -> ComplexMatrix {
        ComplexMatrix::identity(8).scale_re(1.0 / 8.0)
    }

    #[test]
    fn luders_trace_is_outcome_probability() {
        let ghz = named_state(StateKind::Ghz);
        let u = UnsharpMeasurement::new(Direction::Z, 1.0).unwrap();
        let t = luders_map(ghz.density(), &u, Outcome::Plus).trace().re;
        assert!((t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn luders_on_maximally_mixed() {
        let u = UnsharpMeasurement::new(Direction::X, 0.63).unwrap();
        for o in Outcome::BOTH {
            let t = luders_map(&i8_over_8(), &u, o).trace().re;
            assert!((t - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn luders_outcome_traces_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let d = Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            let u = UnsharpMeasurement::new(d, rng.gen_range(0.01..=1.0)).unwrap();
            let ghz = named_state(StateKind::Ghz);
            let total: f64 = Outcome::BOTH
                .iter()
                .map(|&o| luders_map(ghz.density(), &u, o).trace().re)
                .sum();
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn sharp_z_stage_dephases_ghz() {
        let ghz = named_state(StateKind::Ghz);
        let stage = CharlieStage::uniform(&[Direction::Z], 1.0).unwrap();
        let out = averaged_channel(ghz.density(), &stage);
        let mut expect = ComplexMatrix::zeros(8, 8);
        expect[(0, 0)] = Complex64::new(0.5, 0.0);
        expect[(7, 7)] = Complex64::new(0.5, 0.0);
        assert!(out.max_abs_diff(&expect) < 1e-14);
        let c = UnsharpMeasurement::new(Direction::X, 1.0).unwrap();
        assert!(correlation(&out, &Direction::X, &Direction::X, &c).abs() < 1e-14);
    }

    #[test]
    fn averaged_channel_is_unital() {
        let stage = xy_stage(0.7);
        let out = averaged_channel(&i8_over_8(), &stage);
        assert!(out.max_abs_diff(&i8_over_8()) < 1e-14);
    }

    #[test]
    fn xy_stage_damps_xxx_by_closed_form() {
        let lam = 0.74;
        let ghz = named_state(StateKind::Ghz);
        let out = averaged_channel(ghz.density(), &xy_stage(lam));
        let c = UnsharpMeasurement::new(Direction::X, 1.0).unwrap();
        let got = correlation(&out, &Direction::X, &Direction::X, &c);
        let want = (1.0 + (1.0 - lam * lam).sqrt()) / 2.0;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn averaged_channel_preserves_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            // random mixed state from a random pure ensemble
            let mut rho = ComplexMatrix::zeros(8, 8);
            for _ in 0..3 {
                let v: Vec<Complex64> = (0..8)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>();
                let v: Vec<Complex64> = v.iter().map(|c| c / norm.sqrt()).collect();
                rho = &rho + &ComplexMatrix::outer(&v).scale_re(1.0 / 3.0);
            }
            let d = Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            let stage =
                CharlieStage::uniform(&[d, Direction::X], rng.gen_range(0.05..=1.0)).unwrap();
            let out = averaged_channel(&rho, &stage);
            assert!((out.trace().re - 1.0).abs() < 1e-12);
            assert!(min_eigenvalue(&out).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn correlation_ghz_reference_values() {
        let ghz = named_state(StateKind::Ghz);
        let sharp = |d: Direction| UnsharpMeasurement::new(d, 1.0).unwrap();
        let c_xxx = correlation(ghz.density(), &Direction::X, &Direction::X, &sharp(Direction::X));
        let c_xyy = correlation(ghz.density(), &Direction::X, &Direction::Y, &sharp(Direction::Y));
        let c_zzz = correlation(ghz.density(), &Direction::Z, &Direction::Z, &sharp(Direction::Z));
        assert!((c_xxx - 1.0).abs() < 1e-14);
        assert!((c_xyy + 1.0).abs() < 1e-14);
        assert!(c_zzz.abs() < 1e-14);
    }

    #[test]
    fn chain_correlation_stage_one_scales_by_lambda() {
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.74)];
        let got =
            chain_correlation(&ghz, &stages, 1, &Direction::X, &Direction::Y, 0).unwrap();
        assert!((got + 0.74).abs() < 1e-13);
    }

    #[test]
    fn chain_correlation_stage_two_closed_form() {
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.74), xy_stage(1.0)];
        let got =
            chain_correlation(&ghz, &stages, 2, &Direction::X, &Direction::Y, 0).unwrap();
        let want = -(1.0 + (1.0 - 0.74f64 * 0.74).sqrt()) / 2.0;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn chain_correlation_rejects_bad_stage() {
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.5)];
        assert!(chain_correlation(&ghz, &stages, 0, &Direction::X, &Direction::Y, 0).is_err());
        assert!(chain_correlation(&ghz, &stages, 2, &Direction::X, &Direction::Y, 0).is_err());
    }

    #[test]
    fn oracle_matches_stage_two_closed_form() {
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.74), xy_stage(1.0)];
        let got =
            branch_oracle_correlation(&ghz, &stages, 2, &Direction::X, &Direction::Y, 0).unwrap();
        let want = -(1.0 + (1.0 - 0.74f64 * 0.74).sqrt()) / 2.0;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn oracle_single_stage_reduces_to_correlation() {
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.6)];
        let direct = correlation(
            ghz.density(),
            &Direction::X,
            &Direction::Y,
            &stages[0].settings()[0],
        );
        let oracle =
            branch_oracle_correlation(&ghz, &stages, 1, &Direction::X, &Direction::Y, 0).unwrap();
        assert_eq!(direct, oracle);
    }

    #[test]
    fn correlation_linear_in_final_sharpness() {
        let ghz = named_state(StateKind::Ghz);
        let lam = 0.41;
        let stages_full = [xy_stage(0.74), xy_stage(lam)];
        let stages_unit = [xy_stage(0.74), xy_stage(1.0)];
        let full =
            chain_correlation(&ghz, &stages_full, 2, &Direction::X, &Direction::Y, 1).unwrap();
        let unit =
            chain_correlation(&ghz, &stages_unit, 2, &Direction::X, &Direction::Y, 1).unwrap();
        assert!((full - lam * unit).abs() < 1e-12);
    }

    #[test]
    fn no_signaling_state_independent_of_alice_bob() {
        // the evolved state never sees Alice's or Bob's directions at all;
        // assert bit-identical prefix evolution for different correlator queries
        let ghz = named_state(StateKind::Ghz);
        let stages = [xy_stage(0.74), xy_stage(0.88)];
        let s1 = evolve_prefix(&ghz, &stages);
        let s2 = evolve_prefix(&ghz, &stages);
        assert_eq!(s1.last().unwrap(), s2.last().unwrap());
        let ca = chain_correlation(&ghz, &stages, 2, &Direction::X, &Direction::Y, 0).unwrap();
        let cb = chain_correlation(&ghz, &stages, 2, &Direction::Z, &Direction::Z, 0).unwrap();
        // different queries, same underlying chain state; both bounded
        assert!(ca.abs() <= 1.0 + 1e-12 && cb.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn oracle_enumeration_cap() {
        let ghz = named_state(StateKind::Ghz);
        let stages: Vec<CharlieStage> = (0..21).map(|_| xy_stage(0.9)).collect();
        let r = branch_oracle_correlation(&ghz, &stages, 21, &Direction::X, &Direction::Y, 0);
        assert!(matches!(
            r,
            Err(SeqwitError::EnumerationTooLarge { .. })
        ));
    }
}
