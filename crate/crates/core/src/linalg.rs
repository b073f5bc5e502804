//! Small dense complex linear algebra.
//!
//! Everything here works on matrices of dimension at most 16 (two photons with
//! four single-photon modes each), so the routines favour clarity over
//! asymptotic speed. Eigendecompositions go through nalgebra.
//!
//! Two-particle vectors use a fixed Kronecker convention: for `a ⊗ b` the index
//! of the first operand is the slow (outer) one, so entry `i * dim(b) + j`
//! holds `a[i] * b[j]`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues below this are treated as numerical zeros when clipping.
pub const PSD_CLIP: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("two-particle amplitude matrix is not symmetric (max deviation {0:.3e})")]
    NotSymmetric(f64),
}

/// A column of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![ZERO; len])
    }

    pub fn from_reals(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Unit vector `e_k` of length `len`.
    pub fn basis(len: usize, k: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[k] = ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Inner product `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.len(), other.len(), "inner product of mismatched vectors");
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    /// Projector `|v⟩⟨v|`.
    pub fn outer(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| self.0[i] * self.0[j].conj())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Distance to `other` after removing the best global phase,
    /// `min_θ ‖self − e^{iθ}·other‖`.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        let aligned = other.scale(phase);
        self.0
            .iter()
            .zip(&aligned.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Reshape a `d²` two-particle vector into the `d × d` amplitude matrix
    /// `M[i][j] = ψ[i*d + j]`.
    pub fn to_pair_matrix(&self, d: usize) -> Result<ComplexMatrix, LinalgError> {
        if d == 0 || self.len() != d * d {
            return Err(LinalgError::BadDimension(format!(
                "vector of length {} is not a {d}x{d} two-particle state",
                self.len()
            )));
        }
        Ok(ComplexMatrix { rows: d, cols: d, data: self.0.clone() })
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: Self) -> ComplexVector {
        assert_eq!(self.len(), rhs.len());
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: Self) -> ComplexVector {
        assert_eq!(self.len(), rhs.len());
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl FromIterator<C64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadDimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from `M = M†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Purity `Tr(ρ²)`, computed as `Σ|ρ_ij|²` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Hermitian, unit trace and positive semidefinite, each to `tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) || (self.trace() - ONE).norm() > tol {
            return false;
        }
        match hermitian_eig(self) {
            Ok(eig) => eig.values.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        ComplexMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Kronecker product, first operand outer.
pub trait Kron<Rhs = Self> {
    type Output;
    fn kron(&self, rhs: &Rhs) -> Self::Output;
}

impl Kron for ComplexVector {
    type Output = ComplexVector;
    fn kron(&self, rhs: &Self) -> ComplexVector {
        self.0.iter().flat_map(|a| rhs.0.iter().map(move |b| a * b)).collect()
    }
}

impl Kron for ComplexMatrix {
    type Output = ComplexMatrix;
    fn kron(&self, rhs: &Self) -> ComplexMatrix {
        let (br, bc) = (rhs.rows, rhs.cols);
        ComplexMatrix::from_fn(self.rows * br, self.cols * bc, |i, j| {
            self[(i / br, j / bc)] * rhs[(i % br, j % bc)]
        })
    }
}

/// `a ⊗ b` for vectors or matrices.
pub fn kron<T: Kron>(a: &T, b: &T) -> T::Output {
    a.kron(b)
}

/// Which particle a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Trace out one particle of a two-particle operator on `C^d ⊗ C^d`.
pub fn partial_trace(
    rho: &ComplexMatrix,
    d: usize,
    which: Subsystem,
) -> Result<ComplexMatrix, LinalgError> {
    if d == 0 || !rho.is_square() || rho.rows() != d * d {
        return Err(LinalgError::BadDimension(format!(
            "{}x{} operator is not on a {d}x{d} two-particle space",
            rho.rows(),
            rho.cols()
        )));
    }
    let out = match which {
        Subsystem::Second => ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| rho[(i * d + k, j * d + k)]).sum()
        }),
        Subsystem::First => ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| rho[(k * d + i, k * d + j)]).sum()
        }),
    };
    Ok(out)
}

/// Single-particle reduced density matrix of a pure two-particle state,
/// `Tr₂ |ψ⟩⟨ψ|`.
pub fn reduced_density_of(psi: &ComplexVector, d: usize) -> Result<ComplexMatrix, LinalgError> {
    partial_trace(&psi.outer(), d, Subsystem::Second)
}

/// Schmidt parameter `K = 1 / Tr(ρ_r²)` of a pure two-particle state, by
/// brute-force partial trace.
pub fn schmidt_k_by_partial_trace(psi: &ComplexVector, d: usize) -> Result<f64, LinalgError> {
    Ok(1.0 / reduced_density_of(psi, d)?.purity())
}

/// Spectrum of a Hermitian matrix: eigenvalues in descending order with
/// matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

impl HermitianEigen {
    /// `Σ λᵢ vᵢ vᵢ†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            m = &m + &v.outer().scale(C64::new(*lambda, 0.0));
        }
        m
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue is
    /// within `tol` of `lambda`.
    pub fn eigenspace_projector(&self, lambda: f64, tol: f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut p = ComplexMatrix::zeros(n, n);
        for (l, v) in self.values.iter().zip(&self.vectors) {
            if (l - lambda).abs() <= tol {
                p = &p + &v.outer();
            }
        }
        p
    }

    /// Eigenvalues clipped into `[0, 1]`, for use as probabilities.
    pub fn clipped_values(&self) -> Vec<f64> {
        self.values.iter().map(|&l| clip_probability(l)).collect()
    }
}

fn clip_probability(l: f64) -> f64 {
    if l < PSD_CLIP {
        0.0
    } else {
        l.min(1.0)
    }
}

/// Eigendecomposition of a Hermitian matrix (nalgebra's symmetric QR).
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::BadDimension(format!(
            "{}x{} matrix is not square",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(LinalgError::NotHermitian(dev));
    }

    let n = m.rows();
    // Average with the adjoint so round-off asymmetry cannot leak in.
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = a.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| fix_phase(eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    Ok(HermitianEigen { values, vectors })
}

/// Rotate so the largest-modulus entry is real and positive.
fn fix_phase(v: ComplexVector) -> ComplexVector {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(ONE);
    if pivot.norm() == 0.0 {
        return v;
    }
    let norm = v.norm();
    v.scale(pivot.conj() / (pivot.norm() * norm))
}

/// Base-2 von Neumann entropy of a probability spectrum; `0·log 0 = 0`.
pub fn entropy_bits(lambdas: &[f64]) -> f64 {
    let s: f64 = lambdas
        .iter()
        .map(|&l| clip_probability(l))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// Terms with weight below this are dropped from a Schmidt decomposition.
pub const SCHMIDT_DROP: f64 = 1e-12;

/// One product `√λ · ψ(1)ψ(2)` of a symmetric Schmidt decomposition.
#[derive(Clone, Debug)]
pub struct SchmidtTerm {
    pub lambda: f64,
    pub mode: ComplexVector,
}

/// Schmidt decomposition of a permutation-symmetric two-particle state,
/// `Ψ = Σ √λᵢ ψᵢ(1) ψᵢ(2)`, with the same mode on both particles.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub terms: Vec<SchmidtTerm>,
}

impl SchmidtDecomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.lambda).collect()
    }

    /// `K = 1 / Σλ²`.
    pub fn schmidt_k(&self) -> f64 {
        1.0 / self.terms.iter().map(|t| t.lambda * t.lambda).sum::<f64>()
    }

    pub fn reconstruct(&self) -> ComplexVector {
        let len = self.terms.first().map_or(0, |t| t.mode.len());
        let mut psi = ComplexVector::zeros(len * len);
        for t in &self.terms {
            let product = t.mode.kron(&t.mode).scale(C64::new(t.lambda.sqrt(), 0.0));
            psi = &psi + &product;
        }
        psi
    }
}

/// Symmetric (Takagi) Schmidt decomposition of a swap-symmetric state on
/// `C^d ⊗ C^d`.
///
/// With the amplitude matrix `M = R + iJ`, a real eigenpair `(x; y)` of
/// `[[R, J], [J, −R]]` with eigenvalue `s > 0` gives `u = x + iy` obeying
/// `M ū = s u`; the positive half of that spectrum yields `M = Σ s u uᵀ`.
pub fn symmetric_schmidt(psi: &ComplexVector, d: usize) -> Result<SchmidtDecomposition, LinalgError> {
    let m = psi.to_pair_matrix(d)?;
    let asym = m.max_abs_diff(&m.transpose());
    if asym > 1e-12 {
        return Err(LinalgError::NotSymmetric(asym));
    }
    let block = ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let z = m[(i % d, j % d)];
        let x = match (i < d, j < d) {
            (true, true) => z.re,
            (true, false) | (false, true) => z.im,
            (false, false) => -z.re,
        };
        C64::new(x, 0.0)
    });
    let eig = hermitian_eig(&block)?;
    let terms = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .take(d)
        .filter(|(s, _)| **s > 0.0 && s.powi(2) >= SCHMIDT_DROP)
        .map(|(s, w)| {
            let mode: ComplexVector = (0..d).map(|i| C64::new(w[i].re, w[i + d].re)).collect();
            let norm = mode.norm();
            SchmidtTerm { lambda: s * s, mode: mode.scale(C64::new(1.0 / norm, 0.0)) }
        })
        .collect();
    Ok(SchmidtDecomposition { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_vectors_follow_outer_index_convention() {
        let h = ComplexVector::from_reals(&[1.0, 0.0]);
        let v = ComplexVector::from_reals(&[0.0, 1.0]);
        assert_eq!(h.kron(&v), ComplexVector::from_reals(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(h.kron(&h), ComplexVector::from_reals(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = ComplexVector::from_reals(&[s, 0.0, 0.0, s]);
        let rho = phi_plus.outer();
        for which in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&rho, 2, which).unwrap();
            let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
            assert!(r.max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let hh = ComplexVector::from_reals(&[1.0, 0.0, 0.0, 0.0]);
        let r = partial_trace(&hh.outer(), 2, Subsystem::Second).unwrap();
        assert_eq!(r, ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        let rho = ComplexMatrix::identity(6);
        assert!(matches!(
            partial_trace(&rho, 2, Subsystem::First),
            Err(LinalgError::BadDimension(_))
        ));
        assert!(matches!(
            partial_trace(&ComplexMatrix::identity(16), 3, Subsystem::Second),
            Err(LinalgError::BadDimension(_))
        ));
    }

    #[test]
    fn eig_of_scaled_identity() {
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let eig = hermitian_eig(&half).unwrap();
        assert_eq!(eig.values, vec![0.5, 0.5]);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(matches!(hermitian_eig(&m), Err(LinalgError::NotHermitian(_))));
    }

    #[test]
    fn eig_of_complex_hermitian_matrix() {
        // Pauli-y has eigenvalues ±1 with eigenvectors (1, ±i)/√2.
        let sy = ComplexMatrix::from_rows(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        let eig = hermitian_eig(&sy).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexVector::new(vec![c(s, 0.0), c(0.0, s)]);
        assert!(eig.vectors[0].phase_distance(&expected) < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&sy) < 1e-14);
    }

    #[test]
    fn entropy_handles_zeros_and_clipping() {
        assert_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
        assert_eq!(entropy_bits(&[1.0, -1e-15]), 0.0);
        assert!((entropy_bits(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!((entropy_bits(&[0.25; 4]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_schmidt_of_swap_symmetric_pair() {
        // (e0⊗e1 + e1⊗e0)/√2: two equal terms.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexVector::from_reals(&[0.0, s, s, 0.0]);
        let dec = symmetric_schmidt(&psi, 2).unwrap();
        assert_eq!(dec.len(), 2);
        for t in &dec.terms {
            assert!((t.lambda - 0.5).abs() < 1e-14);
        }
        assert!(dec.reconstruct().max_abs_diff(&psi) < 1e-14);
    }

    #[test]
    fn symmetric_schmidt_rejects_antisymmetric_input() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = ComplexVector::from_reals(&[0.0, s, -s, 0.0]);
        assert!(matches!(symmetric_schmidt(&singlet, 2), Err(LinalgError::NotSymmetric(_))));
    }
}
