//! Constrained derivative-free maximization of a stage-m inequality value
//! over all measurement angles and sharpness parameters, with lower-bound
//! constraints on earlier stages.
//!
//! Constraints are handled by a quadratic penalty with escalating weight;
//! each restart runs a Nelder-Mead descent chain through the weight
//! schedule. One start is always seeded at the symmetric settings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SeqwitError;
use crate::inequalities::{mermin_chain, uffink_chain, CharlieSetting, MeasurementPlan};
use crate::quantum::{named_state, Direction, StateKind};

/// Which inequality chain the objective targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectiveKind {
    Mermin,
    Uffink,
}

/// Maximization of a stage value subject to lower bounds on earlier stages.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    pub objective: ObjectiveKind,
    /// 1-based stage whose value is maximized; also the chain length
    /// (the final Charlie measures sharply).
    pub target_stage: usize,
    /// (1-based stage, lower bound) pairs.
    pub constraints: Vec<(usize, f64)>,
    pub initial_state: StateKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_parameters: Vec<f64>,
    pub constraint_residuals: Vec<f64>,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Feasibility slack on constraint residuals.
pub const RESIDUAL_TOL: f64 = 1e-6;

const PENALTY_WEIGHTS: [f64; 4] = [1e1, 1e3, 1e5, 1e7];

fn squash(t: f64) -> f64 {
    (0.5 * (1.0 + t.tanh())).clamp(1e-9, 1.0)
}

fn unsquash(lambda: f64) -> f64 {
    (2.0 * lambda.clamp(1e-9, 1.0 - 1e-12) - 1.0).atanh()
}

impl OptimizationProblem {
    /// Parameter vector length: 4 angles each for Alice and Bob, 4 per
    /// Charlie, plus a squashed sharpness per non-final Charlie.
    pub fn dimension(&self) -> usize {
        8 + 4 * self.target_stage + (self.target_stage - 1)
    }

    fn plan_from(&self, x: &[f64]) -> MeasurementPlan {
        let n = self.target_stage;
        let dir = |i: usize| Direction::new(x[i], x[i + 1]);
        let angle_base = 8 + 4 * n;
        MeasurementPlan {
            alice: [dir(0), dir(2)],
            bob: [dir(4), dir(6)],
            charlies: (0..n)
                .map(|m| CharlieSetting {
                    directions: [dir(8 + 4 * m), dir(8 + 4 * m + 2)],
                    sharpness: if m + 1 < n {
                        squash(x[angle_base + m])
                    } else {
                        1.0
                    },
                })
                .collect(),
        }
    }

    /// Stage values of the chain encoded by the parameter vector.
    pub fn stage_values(&self, x: &[f64]) -> Vec<f64> {
        let plan = self.plan_from(x);
        let initial = named_state(self.initial_state);
        let report = match self.objective {
            ObjectiveKind::Mermin => mermin_chain(&plan, &initial),
            ObjectiveKind::Uffink => uffink_chain(&plan, &initial),
        }
        .expect("stage values always computable for squashed parameters");
        report.values
    }

    fn residuals(&self, values: &[f64]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|&(stage, lb)| values[stage - 1] - lb)
            .collect()
    }

    fn penalized_cost(&self, x: &[f64], weight: f64) -> f64 {
        let values = self.stage_values(x);
        let penalty: f64 = self
            .residuals(&values)
            .iter()
            .map(|r| r.min(0.0).powi(2))
            .sum();
        -values[self.target_stage - 1] + weight * penalty
    }

    /// Symmetric-settings start: all θ = π/2, setting 0 along ŷ, setting 1
    /// along x̂, sharpnesses at the known two-stage double-violation point.
    pub fn symmetric_start(&self) -> Vec<f64> {
        let pi2 = std::f64::consts::FRAC_PI_2;
        let mut x = Vec::with_capacity(self.dimension());
        for _ in 0..(2 + self.target_stage) {
            x.extend_from_slice(&[pi2, pi2, pi2, 0.0]);
        }
        for m in 0..self.target_stage - 1 {
            x.push(unsquash(if m == 0 { 0.74 } else { 0.88 }));
        }
        x
    }
}

/// Plain Nelder-Mead descent on the penalized cost.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    cost: &F,
    start: &[f64],
    step: f64,
    max_iter: usize,
) -> Vec<f64> {
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), cost(start)));
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += step;
        let f = cost(&v);
        simplex.push((v, f));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() < 1e-12 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(v, _)| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let point = |coef: f64| -> Vec<f64> {
            (0..dim)
                .map(|j| centroid[j] + coef * (centroid[j] - worst.0[j]))
                .collect()
        };

        let refl = point(alpha);
        let f_refl = cost(&refl);
        if f_refl < simplex[0].1 {
            let exp = point(gamma);
            let f_exp = cost(&exp);
            simplex[dim] = if f_exp < f_refl { (exp, f_exp) } else { (refl, f_refl) };
        } else if f_refl < simplex[dim - 1].1 {
            simplex[dim] = (refl, f_refl);
        } else {
            let contr = if f_refl < worst.1 {
                point(alpha * rho)
            } else {
                point(-rho)
            };
            let f_contr = cost(&contr);
            if f_contr < worst.1.min(f_refl) {
                simplex[dim] = (contr, f_contr);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for j in 0..dim {
                        entry.0[j] = best[j] + sigma * (entry.0[j] - best[j]);
                    }
                    entry.1 = cost(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    simplex[0].0.clone()
}

/// Normalize angle pairs into θ ∈ [0, π], φ ∈ [0, 2π) without changing the
/// induced directions; sharpness parameters are reported as λ values.
fn canonicalize(problem: &OptimizationProblem, x: &[f64]) -> Vec<f64> {
    let n = problem.target_stage;
    let mut out = Vec::with_capacity(x.len());
    for pair in 0..(4 + 2 * n) {
        let d = Direction::new(x[2 * pair], x[2 * pair + 1]);
        let [nx, ny, nz] = d.unit_vector();
        out.push(nz.clamp(-1.0, 1.0).acos());
        out.push(ny.atan2(nx).rem_euclid(2.0 * std::f64::consts::PI));
    }
    for m in 0..n - 1 {
        out.push(squash(x[8 + 4 * n + m]));
    }
    out
}

/// Multi-start constrained maximization. Deterministic given (seed,
/// restarts); restart results are reduced in restart-index order.
pub fn maximize(
    problem: &OptimizationProblem,
    restarts: usize,
    seed: u64,
) -> Result<OptimizationResult, SeqwitError> {
    assert!(restarts >= 1, "at least one restart required");
    assert!(problem.target_stage >= 1);
    let dim = problem.dimension();
    let max_iter = 100 * dim;

    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None; // value, params, residuals
    let mut fallback: Option<(f64, Vec<f64>, Vec<f64>)> = None;

    for r in 0..restarts {
        let start = if r == 0 {
            problem.symmetric_start()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let mut v: Vec<f64> = (0..8 + 4 * problem.target_stage)
                .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
                .collect();
            v.extend((0..problem.target_stage - 1).map(|_| rng.gen_range(-1.0..1.5)));
            v
        };

        let mut x = start;
        for w in PENALTY_WEIGHTS {
            let cost = |p: &[f64]| problem.penalized_cost(p, w);
            x = nelder_mead(&cost, &x, 0.25, max_iter);
        }

        let values = problem.stage_values(&x);
        let value = values[problem.target_stage - 1];
        let residuals = problem.residuals(&values);
        let feasible = residuals.iter().all(|&r| r >= -RESIDUAL_TOL);
        if feasible {
            if best.as_ref().map_or(true, |(bv, _, _)| value > *bv) {
                best = Some((value, x.clone(), residuals.clone()));
            }
        } else if fallback.as_ref().map_or(true, |(bv, _, _)| value > *bv) {
            fallback = Some((value, x, residuals));
        }
    }

    let (converged, (best_value, params, constraint_residuals)) = match (best, fallback) {
        (Some(b), _) => (true, b),
        (None, Some(f)) => (false, f),
        (None, None) => unreachable!("restarts >= 1 always yields a candidate"),
    };

    Ok(OptimizationResult {
        best_value,
        best_parameters: canonicalize(problem, &params),
        constraint_residuals,
        restarts_used: restarts,
        converged,
    })
}
