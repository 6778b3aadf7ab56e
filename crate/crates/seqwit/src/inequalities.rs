//! Mermin and Uffink genuine-entanglement quantities M_m and U_m for every
//! stage of a measurement plan, with violation verdicts against the
//! biseparable bounds 2√2 and 8.

use serde::{Deserialize, Serialize};

use crate::error::SeqwitError;
use crate::quantum::{Direction, NamedState};
use crate::sequential::{correlation, evolve_prefix, CharlieStage};

/// Biseparable bound of the Mermin quantity.
pub const MERMIN_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Biseparable bound of the Uffink quantity.
pub const UFFINK_BOUND: f64 = 8.0;

/// Correlator index patterns (x, y, z) of the first Mermin/Uffink bracket,
/// with the last entry negated: |C100 + C010 + C001 − C111|.
const BRACKET_ONE: [(usize, usize, usize); 4] = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)];
/// Second Uffink bracket: C110 + C011 + C101 − C000.
const BRACKET_TWO: [(usize, usize, usize); 4] = [(1, 1, 0), (0, 1, 1), (1, 0, 1), (0, 0, 0)];

/// Alice's two directions, Bob's two directions and per-Charlie settings.
#[derive(Debug, Clone)]
pub struct MeasurementPlan {
    pub alice: [Direction; 2],
    pub bob: [Direction; 2],
    pub charlies: Vec<CharlieSetting>,
}

/// One Charlie's two directions and sharpness.
#[derive(Debug, Clone)]
pub struct CharlieSetting {
    pub directions: [Direction; 2],
    pub sharpness: f64,
}

impl MeasurementPlan {
    /// The symmetric configuration used throughout: every direction has
    /// θ = π/2, with setting 0 along ŷ and setting 1 along x̂; the last
    /// Charlie measures sharply.
    pub fn symmetric(lambdas: &[f64]) -> Self {
        let pair = [Direction::Y, Direction::X];
        Self {
            alice: pair,
            bob: pair,
            charlies: lambdas
                .iter()
                .map(|&l| CharlieSetting {
                    directions: pair,
                    sharpness: l,
                })
                .collect(),
        }
    }

    pub fn stages(&self) -> Result<Vec<CharlieStage>, SeqwitError> {
        self.charlies
            .iter()
            .map(|c| CharlieStage::uniform(&c.directions, c.sharpness))
            .collect()
    }
}

/// Per-stage inequality values with their bound and violation verdicts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub values: Vec<f64>,
    pub bound: f64,
    pub verdicts: Vec<bool>,
}

impl ChainReport {
    fn from_values(values: Vec<f64>, bound: f64) -> Self {
        // violation requires strictly exceeding the bound
        let verdicts = values.iter().map(|&v| v > bound).collect();
        Self {
            values,
            bound,
            verdicts,
        }
    }

    /// Percent violation 100·(value − bound)/bound for one stage.
    pub fn percent_violation(&self, stage: usize) -> f64 {
        100.0 * (self.values[stage] - self.bound) / self.bound
    }
}

/// Setting-averaged correlators C̄^m for the given patterns at stage m,
/// combined as first three plus minus the last.
fn bracket_value(
    rho: &crate::linalg::ComplexMatrix,
    plan: &MeasurementPlan,
    stage: &CharlieStage,
    patterns: &[(usize, usize, usize); 4],
) -> f64 {
    let mut acc = 0.0;
    for (t, &(x, y, z)) in patterns.iter().enumerate() {
        let sign = if t == 3 { -1.0 } else { 1.0 };
        let c = correlation(rho, &plan.alice[x], &plan.bob[y], &stage.settings()[z]);
        acc += sign * c;
    }
    acc
}

fn stage_values<F: Fn(f64, f64) -> f64>(
    plan: &MeasurementPlan,
    initial: &NamedState,
    combine: F,
) -> Result<Vec<f64>, SeqwitError> {
    let stages = plan.stages()?;
    let states = evolve_prefix(initial, &stages[..stages.len().saturating_sub(1)]);
    Ok(stages
        .iter()
        .enumerate()
        .map(|(m, stage)| {
            let rho = &states[m];
            let b1 = bracket_value(rho, plan, stage, &BRACKET_ONE);
            let b2 = bracket_value(rho, plan, stage, &BRACKET_TWO);
            combine(b1, b2)
        })
        .collect())
}

/// M_m = |C̄100 + C̄010 + C̄001 − C̄111| for each stage; bound 2√2.
pub fn mermin_chain(plan: &MeasurementPlan, initial: &NamedState) -> Result<ChainReport, SeqwitError> {
    let values = stage_values(plan, initial, |b1, _| b1.abs())?;
    Ok(ChainReport::from_values(values, MERMIN_BOUND))
}

/// U_m = (first bracket)² + (second bracket)² for each stage; bound 8.
pub fn uffink_chain(plan: &MeasurementPlan, initial: &NamedState) -> Result<ChainReport, SeqwitError> {
    let values = stage_values(plan, initial, |b1, b2| b1 * b1 + b2 * b2)?;
    Ok(ChainReport::from_values(values, UFFINK_BOUND))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{named_state, StateKind};

    #[test]
    fn mermin_sharp_ghz_is_maximal() {
        let plan = MeasurementPlan::symmetric(&[1.0]);
        let r = mermin_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        assert!((r.values[0] - 4.0).abs() < 1e-12);
        assert!(r.verdicts[0]);
    }

    #[test]
    fn mermin_stage_one_reference_value() {
        let plan = MeasurementPlan::symmetric(&[0.74]);
        let r = mermin_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        assert!((r.values[0] - 2.96).abs() < 1e-12);
        assert!((r.percent_violation(0) - 4.65).abs() < 0.05);
    }

    #[test]
    fn mermin_stage_two_reference_value() {
        let plan = MeasurementPlan::symmetric(&[0.74, 1.0]);
        let r = mermin_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        let want = 2.0 * (1.0 + (1.0 - 0.74f64 * 0.74).sqrt());
        assert!((r.values[1] - want).abs() < 1e-12);
        assert!((r.values[1] - 3.34).abs() < 0.01);
    }

    #[test]
    fn uffink_sharp_ghz_is_maximal() {
        let plan = MeasurementPlan::symmetric(&[1.0]);
        let r = uffink_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        assert!((r.values[0] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn uffink_scales_as_sixteen_lambda_squared() {
        for lam in [0.70, 0.7246] {
            let plan = MeasurementPlan::symmetric(&[lam]);
            let r = uffink_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
            assert!((r.values[0] - 16.0 * lam * lam).abs() < 1e-12);
        }
        // 5% violation point: U1 = 8.40 at λ1 = √(8.40/16) ≈ 0.7246
        let plan = MeasurementPlan::symmetric(&[(8.40f64 / 16.0).sqrt()]);
        let r = uffink_chain(&plan, &named_state(StateKind::Ghz)).unwrap();
        assert!((r.values[0] - 8.40).abs() < 1e-12);
    }

    #[test]
    fn uffink_equals_mermin_squared_at_symmetric_settings() {
        for lams in [vec![0.8], vec![0.74, 1.0], vec![0.74, 0.88, 1.0]] {
            let plan = MeasurementPlan::symmetric(&lams);
            let ghz = named_state(StateKind::Ghz);
            let m = mermin_chain(&plan, &ghz).unwrap();
            let u = uffink_chain(&plan, &ghz).unwrap();
            for (mv, uv) in m.values.iter().zip(&u.values) {
                assert!((mv * mv - uv).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn algebraic_maxima_hold_on_lambda_grid() {
        let ghz = named_state(StateKind::Ghz);
        for l1 in (1..=10).map(|i| i as f64 / 10.0) {
            for l2 in (1..=10).map(|i| i as f64 / 10.0) {
                let plan = MeasurementPlan::symmetric(&[l1, l2, 1.0]);
                let m = mermin_chain(&plan, &ghz).unwrap();
                let u = uffink_chain(&plan, &ghz).unwrap();
                for v in &m.values {
                    assert!(*v <= 4.0 + 1e-12);
                }
                for v in &u.values {
                    assert!(*v <= 16.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn mermin_monotone_nonincreasing_with_sharp_tail() {
        let ghz = named_state(StateKind::Ghz);
        for i in 1..10 {
            let l1 = i as f64 / 10.0;
            let m1 = mermin_chain(&MeasurementPlan::symmetric(&[l1, 1.0]), &ghz)
                .unwrap()
                .values;
            // with a λ=1 tail, adding more unsharp prefix stages never raises M
            let m2 = mermin_chain(&MeasurementPlan::symmetric(&[l1, l1, 1.0]), &ghz)
                .unwrap()
                .values;
            assert!(m2[2] <= m1[1] + 1e-12);
        }
    }
}
