//! Dense complex matrix arithmetic on the small dimensions (2, 4, 8) used
//! throughout the crate: products, Kronecker products, traces, partial
//! traces and Hermitian eigenvalues.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::SeqwitError;

/// Hermiticity check tolerance for `eig_hermitian` input validation.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Off-diagonal magnitude below which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-13;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Labels for the three qubits, ordered A ⊗ B ⊗ C with A slowest-varying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
    C,
}

impl Subsystem {
    fn index(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Real 2x2 shorthand used for the Pauli constants.
    pub fn from_real_2x2(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::from_rows(
            2,
            2,
            [a, b, c, d]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    /// Outer product |v⟩⟨v| of a (not necessarily normalized) column vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                if d.norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Three-factor Kronecker product in the fixed A ⊗ B ⊗ C ordering.
pub fn kron3(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    kron(&kron(a, b), c)
}

/// Partial trace of an 8x8 operator, keeping the listed subsystems.
///
/// The kept subsystems retain the A ⊗ B ⊗ C ordering; the result has
/// dimension 2^(number kept). An empty `keep` set is rejected.
pub fn partial_trace(m: &ComplexMatrix, keep: &[Subsystem]) -> Result<ComplexMatrix, SeqwitError> {
    if m.rows != 8 || m.cols != 8 {
        return Err(SeqwitError::Dimension {
            expected: 8,
            got: m.rows,
        });
    }
    let mut kept: Vec<usize> = keep.iter().map(|s| s.index()).collect();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(SeqwitError::InvalidSubsystem);
    }
    let traced: Vec<usize> = (0..3).filter(|i| !kept.contains(i)).collect();
    let dim = 1usize << kept.len();
    let mut out = ComplexMatrix::zeros(dim, dim);

    // bit s of a 3-bit index addresses subsystem s, A being bit 2.
    let bit = |idx: usize, sub: usize| (idx >> (2 - sub)) & 1;
    let assemble = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut full = 0usize;
        for (pos, &s) in kept.iter().enumerate() {
            let b = (kept_bits >> (kept.len() - 1 - pos)) & 1;
            full |= b << (2 - s);
        }
        for (pos, &s) in traced.iter().enumerate() {
            let b = (traced_bits >> (traced.len() - 1 - pos)) & 1;
            full |= b << (2 - s);
        }
        full
    };
    let _ = bit;

    let tdim = 1usize << traced.len();
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..tdim {
                acc += m[(assemble(i, t), assemble(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending, via cyclic complex Jacobi
/// rotations. Rejects non-Hermitian input.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>, SeqwitError> {
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(SeqwitError::NotHermitian);
    }
    let n = m.rows;
    let mut a = m.clone();
    // symmetrize so rounding in the input cannot drift the sweep
    for i in 0..n {
        for j in 0..n {
            let h = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = h;
            a[(j, i)] = h.conj();
        }
    }

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gn = g.norm();
                if gn < JACOBI_TOL {
                    continue;
                }
                let phase = g / gn;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * gn).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // unitary: col p -> c·p + s·conj(phase)·q, col q -> -s·phase·p + c·q
                let up = phase * s;
                // rows (left multiply by U^H)
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * up.conj();
                    a[(q, j)] = aqj * c - apj * up;
                }
                // columns (right multiply by U)
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * up;
                    a[(i, q)] = aiq * c - aip * up.conj();
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Smallest eigenvalue, for positivity checks.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64, SeqwitError> {
    Ok(eig_hermitian(m)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli_x, pauli_y, pauli_z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let entries = (0..n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_rows(n, n, entries)
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let m = random_matrix(rng, n);
        (&m + &m.adjoint()).scale_re(0.5)
    }

    #[test]
    fn kron_pauli_z_pair_is_diagonal_signs() {
        let zz = kron(&pauli_z(), &pauli_z());
        let expect = [1.0, -1.0, -1.0, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expect[i] } else { 0.0 };
                assert!((zz[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_identities_gives_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert!(kron(&i2, &i2).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn kron_traceless_factor_stays_traceless() {
        let i2 = ComplexMatrix::identity(2);
        let x_ii = kron3(&pauli_x(), &i2, &i2);
        assert!(x_ii.trace().norm() < 1e-15);
    }

    #[test]
    fn kron_trace_is_product_of_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 2);
            let b = random_matrix(&mut rng, 4);
            let lhs = kron(&a, &b).trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn kron_mixed_product_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let (a, b, c, d) = (
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
            );
            let lhs = &kron(&a, &b) * &kron(&c, &d);
            let rhs = kron(&(&a * &c), &(&b * &d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_ghz_marginal_is_maximally_mixed() {
        let ghz = crate::quantum::named_state(crate::quantum::StateKind::Ghz);
        let rc = partial_trace(ghz.density(), &[Subsystem::C]).unwrap();
        assert!(rc.max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-14);
    }

    #[test]
    fn partial_trace_keep_all_is_identity_map() {
        let ghz = crate::quantum::named_state(crate::quantum::StateKind::Ghz);
        let all = partial_trace(ghz.density(), &[Subsystem::A, Subsystem::B, Subsystem::C]).unwrap();
        assert!(all.max_abs_diff(ghz.density()) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(1.0, 0.0); // |000>
        let rho = ComplexMatrix::outer(&v);
        let rc = partial_trace(&rho, &[Subsystem::C]).unwrap();
        let mut expect = ComplexMatrix::zeros(2, 2);
        expect[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(rc.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 8);
            let t = h.trace();
            for keep in [&[Subsystem::A][..], &[Subsystem::A, Subsystem::B][..]] {
                let r = partial_trace(&h, keep).unwrap();
                assert!((r.trace() - t).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[Subsystem::A]).is_err());
    }

    #[test]
    fn eig_pauli_spectrum() {
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let e = eig_hermitian(&p).unwrap();
            assert!((e[0] + 1.0).abs() < 1e-10 && (e[1] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eig_scalar_matrix() {
        let m = ComplexMatrix::identity(2).scale_re(0.5);
        let e = eig_hermitian(&m).unwrap();
        assert!((e[0] - 0.5).abs() < 1e-12 && (e[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eig_pure_state_spectrum() {
        let ghz = crate::quantum::named_state(crate::quantum::StateKind::Ghz);
        let e = eig_hermitian(ghz.density()).unwrap();
        for v in &e[..7] {
            assert!(v.abs() < 1e-10);
        }
        assert!((e[7] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(eig_hermitian(&m).is_err());
    }

    #[test]
    fn eig_matches_trace_and_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let g = random_matrix(&mut rng, 8);
            let psd = &g * &g.adjoint(); // positive semidefinite by construction
            let e = eig_hermitian(&psd).unwrap();
            assert!(e[0] >= -1e-10);
            let sum: f64 = e.iter().sum();
            assert!((sum - psd.trace().re).abs() < 1e-9);
        }
    }
}
