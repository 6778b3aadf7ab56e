//! W-state and GHZ-state genuine-entanglement witnesses: local-correlation
//! decompositions, single-sided unsharp variants, affine-in-λ coefficients
//! and biseparable-state sampling for positivity checks.
//!
//! Each witness is stored as two operators: the λ-independent part and the
//! part whose third-qubit factor is nontrivial. Scaling the latter by λ
//! implements the substitution ⟨σ ⊗ σ ⊗ σ^λ⟩ → λ⟨σ ⊗ σ ⊗ σ⟩, so the
//! unsharp expectation is affine in λ by construction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SeqwitError;
use crate::linalg::{kron, kron3, ComplexMatrix};
use crate::quantum::{named_state, pauli_x, pauli_y, pauli_z, Direction, StateKind};

/// Biseparable lower-bound constant of the λ-independent remainder.
pub const BISEPARABLE_BOUND_CONSTANT: f64 = 0.25;

/// Which bipartition a sampled product state is separable across.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bipartition {
    /// A | BC
    AvsBC,
    /// B | AC
    BvsAC,
    /// C | AB
    CvsAB,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::AvsBC, Bipartition::BvsAC, Bipartition::CvsAB];
}

/// A genuine-entanglement witness with its decomposition split into the
/// λ-independent part and the λ-scaled (third-factor nontrivial) part.
#[derive(Debug, Clone)]
pub struct WitnessSpec {
    kind: StateKind,
    sharp_operator: ComplexMatrix,
    /// Terms whose third factor is the identity.
    fixed_part: ComplexMatrix,
    /// Terms whose third factor is nontrivial; scaled by λ in the unsharp variant.
    scaled_part: ComplexMatrix,
    /// Charlie-side direction ensemble of the averaged channel in the
    /// witness protocol (5 directions for W, 4 for GHZ).
    correlation_settings: Vec<Direction>,
}

/// Expectation Tr[W^λ ρ] = alpha − beta·λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineWitnessValue {
    pub alpha: f64,
    pub beta: f64,
}

impl AffineWitnessValue {
    pub fn at(&self, lambda: f64) -> f64 {
        self.alpha - self.beta * lambda
    }

    /// λ at which the expectation crosses zero.
    pub fn root(&self) -> f64 {
        self.alpha / self.beta
    }
}

fn id2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

/// Direction of (ẑ ± x̂)/√2 and friends, expressed as (θ, φ).
fn tilted(a: char, sign: f64, b: char) -> Direction {
    let axis = |c: char| -> [f64; 3] {
        match c {
            'x' => [1.0, 0.0, 0.0],
            'y' => [0.0, 1.0, 0.0],
            _ => [0.0, 0.0, 1.0],
        }
    };
    let va = axis(a);
    let vb = axis(b);
    let n = [
        (va[0] + sign * vb[0]) / std::f64::consts::SQRT_2,
        (va[1] + sign * vb[1]) / std::f64::consts::SQRT_2,
        (va[2] + sign * vb[2]) / std::f64::consts::SQRT_2,
    ];
    Direction::new(n[2].acos(), n[1].atan2(n[0]).rem_euclid(2.0 * std::f64::consts::PI))
}

/// Sum the three-factor terms `(coeff, f1, f2, f3)` into (fixed, scaled)
/// parts according to whether the third factor is the identity.
fn accumulate(
    terms: &[(f64, &ComplexMatrix, &ComplexMatrix, &ComplexMatrix)],
    prefactor: f64,
) -> (ComplexMatrix, ComplexMatrix) {
    let mut fixed = ComplexMatrix::zeros(8, 8);
    let mut scaled = ComplexMatrix::zeros(8, 8);
    for (coeff, f1, f2, f3) in terms {
        let term = kron3(f1, f2, f3).scale_re(coeff * prefactor);
        if f3.max_abs_diff(&id2()) < 1e-15 {
            fixed = &fixed + &term;
        } else {
            scaled = &scaled + &term;
        }
    }
    (fixed, scaled)
}

fn build_w_parts() -> (ComplexMatrix, ComplexMatrix) {
    let i = id2();
    let z = pauli_z();
    let zpx = &pauli_z() + &pauli_x();
    let zmx = &pauli_z() - &pauli_x();
    let zpy = &pauli_z() + &pauli_y();
    let zmy = &pauli_z() - &pauli_y();

    let mut terms: Vec<(f64, &ComplexMatrix, &ComplexMatrix, &ComplexMatrix)> = vec![
        (13.0, &i, &i, &i),
        (3.0, &z, &i, &i),
        (3.0, &i, &z, &i),
        (3.0, &i, &i, &z),
        (5.0, &z, &z, &i),
        (5.0, &z, &i, &z),
        (5.0, &i, &z, &z),
        (7.0, &z, &z, &z),
    ];
    for v in [&zpx, &zmx, &zpy, &zmy] {
        terms.push((-1.0, &i, &i, v));
        terms.push((-1.0, &i, v, &i));
        terms.push((-1.0, v, &i, &i));
        terms.push((-1.0, &i, v, v));
        terms.push((-1.0, v, &i, v));
        terms.push((-1.0, v, v, &i));
        terms.push((-1.0, v, v, v));
    }
    accumulate(&terms, 1.0 / 24.0)
}

fn build_ghz_parts() -> (ComplexMatrix, ComplexMatrix) {
    let i = id2();
    let z = pauli_z();
    let x = pauli_x();
    let xpy = &pauli_x() + &pauli_y();
    let xmy = &pauli_x() - &pauli_y();

    let terms: Vec<(f64, &ComplexMatrix, &ComplexMatrix, &ComplexMatrix)> = vec![
        (3.0, &i, &i, &i),
        (-1.0, &i, &z, &z),
        (-1.0, &z, &i, &z),
        (-1.0, &z, &z, &i),
        (-2.0, &x, &x, &x),
        (0.5, &xpy, &xpy, &xpy),
        (0.5, &xmy, &xmy, &xmy),
    ];
    accumulate(&terms, 1.0 / 8.0)
}

/// Construct a witness from its local-correlation decomposition and verify
/// the decomposition resums to the closed form. Panics on internal
/// inconsistency since both sides are compile-time constants.
pub fn build_witness(kind: StateKind) -> WitnessSpec {
    let (fixed_part, scaled_part, closed_form, correlation_settings) = match kind {
        StateKind::W => {
            let (f, s) = build_w_parts();
            let closed = &kron(&id2(), &ComplexMatrix::identity(4)).scale_re(2.0 / 3.0)
                - &named_state(StateKind::W).density().clone();
            let settings = vec![
                Direction::Z,
                tilted('z', 1.0, 'x'),
                tilted('z', -1.0, 'x'),
                tilted('z', 1.0, 'y'),
                tilted('z', -1.0, 'y'),
            ];
            (f, s, closed, settings)
        }
        StateKind::Ghz => {
            let (f, s) = build_ghz_parts();
            let closed = &kron(&id2(), &ComplexMatrix::identity(4)).scale_re(0.5)
                - &named_state(StateKind::Ghz).density().clone();
            let settings = vec![
                Direction::Z,
                Direction::X,
                tilted('x', 1.0, 'y'),
                tilted('x', -1.0, 'y'),
            ];
            (f, s, closed, settings)
        }
    };
    let sharp_operator = &fixed_part + &scaled_part;
    assert!(
        sharp_operator.max_abs_diff(&closed_form) < 1e-12,
        "witness decomposition does not resum to the closed form"
    );
    WitnessSpec {
        kind,
        sharp_operator,
        fixed_part,
        scaled_part,
        correlation_settings,
    }
}

impl WitnessSpec {
    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn sharp_operator(&self) -> &ComplexMatrix {
        &self.sharp_operator
    }

    pub fn correlation_settings(&self) -> &[Direction] {
        &self.correlation_settings
    }

    pub fn biseparable_bound_constant(&self) -> f64 {
        BISEPARABLE_BOUND_CONSTANT
    }

    /// The unsharp witness W^λ with every nontrivial third-qubit factor
    /// scaled by λ.
    pub fn unsharp_operator(&self, lambda: f64) -> Result<ComplexMatrix, SeqwitError> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(SeqwitError::SharpnessOutOfRange(lambda));
        }
        Ok(&self.fixed_part + &self.scaled_part.scale_re(lambda))
    }
}

/// Tr[W^λ ρ].
pub fn unsharp_expectation(
    spec: &WitnessSpec,
    rho: &ComplexMatrix,
    lambda: f64,
) -> Result<f64, SeqwitError> {
    Ok(spec.unsharp_operator(lambda)?.trace_product(rho).re)
}

/// Extract (alpha, beta) with Tr[W^λ ρ] = alpha − beta·λ.
pub fn affine_coefficients(spec: &WitnessSpec, rho: &ComplexMatrix) -> AffineWitnessValue {
    AffineWitnessValue {
        alpha: spec.fixed_part.trace_product(rho).re,
        beta: -spec.scaled_part.trace_product(rho).re,
    }
}

/// Closed-form stage-2 witness expectation Tr[W^{λ₂} ρ^{λ₁}] from the
/// averaged post-measurement state.
pub fn charlie2_closed_form(kind: StateKind, lambda1: f64, lambda2: f64) -> f64 {
    let f1 = (1.0 - lambda1 * lambda1).sqrt();
    match kind {
        StateKind::W => (35.0 - (23.0 + 42.0 * f1) * lambda2) / 90.0,
        StateKind::Ghz => (1.0 - (1.0 + 2.0 * f1) * lambda2) / 4.0,
    }
}

fn haar_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                Complex64::new(
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                )
            })
            .collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// A Haar-random pure product state across the chosen bipartition:
/// single-qubit factor ⊗ two-qubit factor, reassembled into the fixed
/// A ⊗ B ⊗ C ordering.
pub fn sample_biseparable(bipartition: Bipartition, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_biseparable_with(&mut rng, bipartition)
}

/// Same as [`sample_biseparable`] but drawing from a caller-owned RNG, for
/// bulk fuzzing.
pub fn sample_biseparable_with(rng: &mut impl Rng, bipartition: Bipartition) -> ComplexMatrix {
    let single = haar_vector(rng, 2);
    let pair = haar_vector(rng, 4);
    // assemble the 8-amplitude vector honoring qubit positions
    let mut full = vec![Complex64::new(0.0, 0.0); 8];
    for (idx, amp) in full.iter_mut().enumerate() {
        let a = (idx >> 2) & 1;
        let b = (idx >> 1) & 1;
        let c = idx & 1;
        *amp = match bipartition {
            Bipartition::AvsBC => single[a] * pair[(b << 1) | c],
            Bipartition::BvsAC => single[b] * pair[(a << 1) | c],
            Bipartition::CvsAB => single[c] * pair[(a << 1) | b],
        };
    }
    ComplexMatrix::outer(&full)
}
