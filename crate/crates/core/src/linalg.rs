//! Small dense complex linear algebra.
//!
//! Matrices here are at most 8x8 (in practice 2x2 and 4x4), so everything is
//! a plain row-major `Vec` with no blocking or SIMD. Distances are Frobenius
//! norms throughout.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Shorthand constructor for a double-precision complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const ZERO: Complex64 = c64(0.0, 0.0);
pub const ONE: Complex64 = c64(1.0, 0.0);
pub const I: Complex64 = c64(0.0, 1.0);

/// Largest dimension accepted by [`mat_exp`].
pub const MAX_EXP_DIM: usize = 8;

/// Taylor order used on the scaled matrix in [`mat_exp`]. With the scaled
/// norm at most 1/2 the truncation error is below 0.5^19 / 19! ~ 1e-23.
const TAYLOR_ORDER: usize = 18;

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// 2x2 matrix from its four entries, row by row.
    pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { rows: 2, cols: 2, data: vec![a, b, c, d] }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, &e) in entries.iter().enumerate() {
            m[(k, k)] = e;
        }
        m
    }

    /// Outer product |a><b|.
    pub fn outer(a: &StateVector, b: &StateVector) -> Self {
        Self::from_fn(a.dim(), b.dim(), |r, c| a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        StateVector::new(
            (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
                .collect(),
        )
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.distance(&self.adjoint()) <= tol
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        self.is_square() && self.distance(&-&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && unitarity_defect(self) <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col] == ZERO {
                return Ok(ZERO);
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= factor * v;
                }
            }
        }
        Ok(det)
    }

    /// Square sub-block picking the given rows and columns.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |r, c| self[(indices[r], indices[c])])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

/// Complex amplitudes of a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        assert!(!amplitudes.is_empty(), "state vector must have at least one component");
        Self { amplitudes }
    }

    /// Standard basis vector `|k>` in `dim` dimensions.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalise the zero vector");
        self.scale(c64(1.0 / n, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|&a| a * s).collect() }
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn overlap_sqr(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.amplitudes[k]
    }
}

impl From<Vec<Complex64>> for StateVector {
    fn from(amplitudes: Vec<Complex64>) -> Self {
        Self::new(amplitudes)
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::mat2(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::mat2(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::mat2(ONE, ZERO, ZERO, -ONE)
}

/// Matrix exponential by scaling and squaring around a fixed-order Taylor
/// series.
pub fn mat_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("exponential of {}x{} matrix", m.rows, m.cols)));
    }
    if m.rows > MAX_EXP_DIM {
        return Err(Error::Dimension(format!(
            "exponential supports dimension <= {MAX_EXP_DIM}, got {}",
            m.rows
        )));
    }
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = m.scale_re(1.0 / (2.0f64).powi(squarings as i32));

    // Horner: I + X(I + X/2(I + X/3(...)))
    let n = m.rows;
    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        acc = &id + &(&scaled * &acc).scale_re(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    Ok(acc)
}

/// Splits a 2x2 matrix as `c0 I + v.sigma`.
pub fn pauli_decompose(m: &ComplexMatrix) -> Result<(Complex64, [Complex64; 3])> {
    if m.rows != 2 || m.cols != 2 {
        return Err(Error::Dimension(format!("Pauli decomposition of {}x{}", m.rows, m.cols)));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    Ok(((a + d) * 0.5, [(b + c) * 0.5, I * (b - c) * 0.5, (a - d) * 0.5]))
}

/// Closed-form `exp(c0 I + v.sigma) = e^{c0} (cosh w I + sinh(w)/w v.sigma)` with
/// `w^2 = v.v` (bilinear, not Hermitian). Both `cosh w` and `sinh(w)/w` are
/// even in `w`, so the branch of the square root is irrelevant.
pub fn pauli_exp(c0: Complex64, v: [Complex64; 3]) -> ComplexMatrix {
    let w2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let (ch, sh_over_w) = if w2.norm() < 1e-8 {
        // Series to w^4; the next term is w^6/5040.
        (ONE + w2 * 0.5 + w2 * w2 / 24.0, ONE + w2 / 6.0 + w2 * w2 / 120.0)
    } else {
        let w = w2.sqrt();
        (w.cosh(), w.sinh() / w)
    };
    let e = c0.exp();
    let s = e * sh_over_w;
    ComplexMatrix::mat2(
        e * ch + s * v[2],
        s * (v[0] - I * v[1]),
        s * (v[0] + I * v[1]),
        e * ch - s * v[2],
    )
}

/// Exponential of a 2x2 matrix through its Pauli decomposition.
pub fn exp2(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (c0, v) = pauli_decompose(m)?;
    Ok(pauli_exp(c0, v))
}

/// Exponential using the closed form for 2x2 and the series otherwise.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows == 2 && m.cols == 2 {
        exp2(m)
    } else {
        mat_exp(m)
    }
}

/// `||U^dagger U - I||_F`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    assert!(u.is_square(), "unitarity defect of a non-square matrix");
    (&(&u.adjoint() * u) - &ComplexMatrix::identity(u.rows)).frobenius_norm()
}

/// `||AB - BA||_F`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.commutator(b).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    // Plain Taylor sum with no scaling; independent of mat_exp's path.
    fn taylor_oracle(m: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::identity(m.rows());
        let mut term = ComplexMatrix::identity(m.rows());
        for k in 1..terms {
            term = (&term * m).scale_re(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    fn pseudo_random_antihermitian(n: usize, seed: u64, target_norm: f64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let h = ComplexMatrix::from_fn(n, n, |_, _| c64(next(), next()));
        let herm = &h + &h.adjoint();
        let a = herm.scale(I);
        a.scale_re(target_norm / a.frobenius_norm())
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(mat_exp(&z).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(pauli_exp(ZERO, [ZERO; 3]), ComplexMatrix::identity(2));
    }

    #[test]
    fn exp_of_quarter_turn_about_x() {
        let m = pauli_x().scale(I * FRAC_PI_2);
        let expected = pauli_x().scale(I);
        assert!(mat_exp(&m).unwrap().distance(&expected) < 1e-14);
        assert!(exp2(&m).unwrap().distance(&expected) < 1e-14);
    }

    #[test]
    fn pauli_exp_of_i_gamma_sigma_y_is_real_rotation() {
        let gamma = 0.73;
        let u = pauli_exp(ZERO, [ZERO, c64(0.0, gamma), ZERO]);
        let (c, s) = (gamma.cos(), gamma.sin());
        let expected = ComplexMatrix::mat2(c64(c, 0.0), c64(s, 0.0), c64(-s, 0.0), c64(c, 0.0));
        assert!(u.distance(&expected) < 1e-15);
    }

    #[test]
    fn mat_exp_matches_taylor_oracle_for_random_antihermitian_4x4() {
        for seed in 0..20 {
            let m = pseudo_random_antihermitian(4, seed, 1.0);
            let oracle = taylor_oracle(&m, 30);
            let e = mat_exp(&m).unwrap();
            assert!(e.distance(&oracle) < 1e-12, "seed {seed}: {}", e.distance(&oracle));
            assert!(unitarity_defect(&e) < 1e-12);
        }
    }

    #[test]
    fn mat_exp_rejects_non_square_and_oversized() {
        assert!(matches!(mat_exp(&ComplexMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
        assert!(matches!(mat_exp(&ComplexMatrix::zeros(9, 9)), Err(Error::Dimension(_))));
    }

    #[test]
    fn unitarity_defect_of_scaled_identity() {
        assert_eq!(unitarity_defect(&ComplexMatrix::identity(3)), 0.0);
        let two = ComplexMatrix::identity(2).scale_re(2.0);
        assert!((unitarity_defect(&two) - 3.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn from_row_major_validates_length() {
        assert!(ComplexMatrix::from_row_major(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::from_row_major(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::from_row_major(1, 2, vec![ONE; 2]).is_ok());
    }

    #[test]
    fn determinant_of_permutation_and_triangular() {
        let p = pauli_x();
        assert!((p.determinant().unwrap() + ONE).norm() < 1e-15);
        let t = ComplexMatrix::from_fn(3, 3, |r, c| if c >= r { c64((r + c + 1) as f64, 1.0) } else { ZERO });
        let expected = t[(0, 0)] * t[(1, 1)] * t[(2, 2)];
        assert!((t.determinant().unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn hermiticity_predicates() {
        let y = pauli_y();
        assert!(y.is_hermitian(0.0));
        assert!(y.scale(I).is_antihermitian(1e-15));
        assert!(!y.scale(I).is_hermitian(1e-3));
        assert!(y.is_unitary(1e-15));
    }

    #[test]
    fn commutator_of_pauli_pair() {
        // [X, Y] = 2iZ
        let c = pauli_x().commutator(&pauli_y());
        assert!(c.distance(&pauli_z().scale(c64(0.0, 2.0))) < 1e-15);
        assert!((commutator_norm(&pauli_x(), &pauli_y()) - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn state_vector_basics() {
        let v = StateVector::new(vec![c64(3.0, 0.0), c64(0.0, 4.0)]);
        assert_eq!(v.norm(), 5.0);
        let n = v.normalized();
        assert!((n.norm() - 1.0).abs() < 1e-15);
        assert!((n.inner(&n) - ONE).norm() < 1e-15);
        let e1 = StateVector::basis(2, 1);
        assert!((e1.inner(&v) - c64(0.0, 4.0)).norm() < 1e-15);
    }
}
