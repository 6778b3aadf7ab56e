//! Measurement directions, spin observables, unsharp effect operators and
//! the named three-qubit states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SeqwitError;
use crate::linalg::ComplexMatrix;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_2x2(0.0, 1.0, 1.0, 0.0)
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_2x2(1.0, 0.0, 0.0, -1.0)
}

/// Spherical measurement direction (θ, φ) on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// The induced Cartesian unit vector (sinθcosφ, sinθsinφ, cosθ).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub const X: Direction = Direction {
        theta: std::f64::consts::FRAC_PI_2,
        phi: 0.0,
    };
    pub const Y: Direction = Direction {
        theta: std::f64::consts::FRAC_PI_2,
        phi: std::f64::consts::FRAC_PI_2,
    };
    pub const Z: Direction = Direction {
        theta: 0.0,
        phi: 0.0,
    };
}

/// Spin observable n·σ for the given direction: Hermitian, traceless,
/// squaring to the identity.
pub fn observable(d: &Direction) -> ComplexMatrix {
    let [nx, ny, nz] = d.unit_vector();
    let mut m = pauli_x().scale_re(nx);
    m = &m + &pauli_y().scale_re(ny);
    m = &m + &pauli_z().scale_re(nz);
    m
}

/// Measurement outcome label, ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];
}

/// An unsharp spin measurement: a direction plus a sharpness λ ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnsharpMeasurement {
    direction: Direction,
    sharpness: f64,
}

impl UnsharpMeasurement {
    pub fn new(direction: Direction, sharpness: f64) -> Result<Self, SeqwitError> {
        if !(sharpness > 0.0 && sharpness <= 1.0) {
            return Err(SeqwitError::SharpnessOutOfRange(sharpness));
        }
        Ok(Self {
            direction,
            sharpness,
        })
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    /// Quality factor F = √(1 − λ²).
    pub fn quality_factor(&self) -> f64 {
        (1.0 - self.sharpness * self.sharpness).sqrt()
    }

    /// Precision G; equals the sharpness λ.
    pub fn precision(&self) -> f64 {
        self.sharpness
    }
}

/// Projector (I ± n·σ)/2 onto the given outcome of a sharp measurement.
pub fn projector(d: &Direction, outcome: Outcome) -> ComplexMatrix {
    let obs = observable(d).scale_re(outcome.sign());
    (&ComplexMatrix::identity(2) + &obs).scale_re(0.5)
}

/// Effect operator E = λ P_o + (1−λ) I/2 of an unsharp measurement.
pub fn effect(u: &UnsharpMeasurement, outcome: Outcome) -> ComplexMatrix {
    let lam = u.sharpness();
    let p = projector(u.direction(), outcome).scale_re(lam);
    &p + &ComplexMatrix::identity(2).scale_re((1.0 - lam) / 2.0)
}

/// Square root of the effect operator in closed form:
/// √((1+λ)/2) P_o + √((1−λ)/2) P_{−o}.
pub fn sqrt_effect(u: &UnsharpMeasurement, outcome: Outcome) -> ComplexMatrix {
    let lam = u.sharpness();
    let flipped = match outcome {
        Outcome::Plus => Outcome::Minus,
        Outcome::Minus => Outcome::Plus,
    };
    let a = ((1.0 + lam) / 2.0).sqrt();
    let b = ((1.0 - lam) / 2.0).sqrt();
    &projector(u.direction(), outcome).scale_re(a) + &projector(u.direction(), flipped).scale_re(b)
}

/// The two genuinely entangled three-qubit state classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ghz,
    W,
}

impl std::fmt::Display for StateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateKind::Ghz => write!(f, "ghz"),
            StateKind::W => write!(f, "w"),
        }
    }
}

/// A named pure three-qubit state held as an 8x8 density operator.
#[derive(Debug, Clone)]
pub struct NamedState {
    kind: StateKind,
    density: ComplexMatrix,
}

impl NamedState {
    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }
}

/// GHZ = (|000⟩+|111⟩)/√2 or W = (|001⟩+|010⟩+|100⟩)/√3 as a density operator.
pub fn named_state(kind: StateKind) -> NamedState {
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    match kind {
        StateKind::Ghz => {
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            v[0b000] = a;
            v[0b111] = a;
        }
        StateKind::W => {
            let a = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
            v[0b001] = a;
            v[0b010] = a;
            v[0b100] = a;
        }
    }
    NamedState {
        kind,
        density: ComplexMatrix::outer(&v),
    }
}
