//! Polarization qutrits: `Ψ = C₁Ψ_HH + C₂Ψ_HV + C₃Ψ_VV`.
//!
//! The two-photon column uses the single-photon order `(H, V)` and the
//! Kronecker convention of [`crate::linalg`], so
//! `Ψ = (C₁, C₂/√2, C₂/√2, C₃)`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::{self, ComplexMatrix, ComplexVector, Kron, SchmidtDecomposition};
use crate::state::{normalize, phase_distance, StateError};

const ZERO: C64 = C64::new(0.0, 0.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A normalized qutrit `(C₁, C₂, C₃)`. The global phase is kept as given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QutritState {
    amps: [C64; 3],
}

/// Coefficients of the Bell-state expansion `Ψ = C₊Φ⁺ + C₂Ψ⁺ + C₋Φ⁻`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellCoefficients {
    pub c_plus: C64,
    pub c_minus: C64,
    pub c2: C64,
}

impl BellCoefficients {
    /// Back to `(C₁, C₂, C₃)` via `C₁,₃ = (C₊ ± C₋)/√2`.
    pub fn to_qutrit(&self) -> QutritState {
        QutritState {
            amps: [
                (self.c_plus + self.c_minus) * FRAC_1_SQRT_2,
                self.c2,
                (self.c_plus - self.c_minus) * FRAC_1_SQRT_2,
            ],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_plus.norm_sqr() + self.c_minus.norm_sqr() + self.c2.norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub schmidt_k: f64,
    pub concurrence: f64,
    /// Subsystem von Neumann entropy in bits.
    pub entropy: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Biphoton polarization vector `ξ = Tr(ρ_r σ)` (half the Stokes vector)
/// and its length, the degree of polarization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarizationReport {
    pub xi: [f64; 3],
    pub degree_p: f64,
}

impl PolarizationReport {
    /// Stokes parameters `S = 2ξ`.
    pub fn stokes(&self) -> [f64; 3] {
        self.xi.map(|x| 2.0 * x)
    }
}

impl QutritState {
    /// Renormalizes `(c1, c2, c3)` to unit norm.
    pub fn new(c1: C64, c2: C64, c3: C64) -> Result<Self, StateError> {
        Ok(Self { amps: normalize([c1, c2, c3])? })
    }

    pub fn from_reals(c1: f64, c2: f64, c3: f64) -> Result<Self, StateError> {
        Self::new(re(c1), re(c2), re(c3))
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self, StateError> {
        match amps {
            [c1, c2, c3] => Self::new(*c1, *c2, *c3),
            _ => Err(StateError::WrongLength { expected: 3, got: amps.len() }),
        }
    }

    /// `|Cᵢ| e^{iφᵢ}`.
    pub fn from_polar(magnitudes: [f64; 3], phases: [f64; 3]) -> Result<Self, StateError> {
        let a = [0, 1, 2].map(|i| C64::from_polar(magnitudes[i], phases[i]));
        Self::new(a[0], a[1], a[2])
    }

    /// The three basis states `Ψ_HH`, `Ψ_HV`, `Ψ_VV`.
    pub fn hh() -> Self {
        Self { amps: [re(1.0), ZERO, ZERO] }
    }

    pub fn hv() -> Self {
        Self { amps: [ZERO, re(1.0), ZERO] }
    }

    pub fn vv() -> Self {
        Self { amps: [ZERO, ZERO, re(1.0)] }
    }

    pub fn amplitudes(&self) -> [C64; 3] {
        self.amps
    }

    pub fn c1(&self) -> C64 {
        self.amps[0]
    }

    pub fn c2(&self) -> C64 {
        self.amps[1]
    }

    pub fn c3(&self) -> C64 {
        self.amps[2]
    }

    pub fn magnitudes(&self) -> [f64; 3] {
        self.amps.map(|z| z.norm())
    }

    pub fn phases(&self) -> [f64; 3] {
        self.amps.map(|z| z.arg())
    }

    /// Distance to `other` modulo a global phase.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        phase_distance(&self.amps, &other.amps)
    }

    /// Two-photon wave function as a 4-row column.
    pub fn wavefunction(&self) -> ComplexVector {
        let [c1, c2, c3] = self.amps;
        let mid = c2 * FRAC_1_SQRT_2;
        ComplexVector::new(vec![c1, mid, mid, c3])
    }

    pub fn bell_coefficients(&self) -> BellCoefficients {
        let [c1, c2, c3] = self.amps;
        BellCoefficients {
            c_plus: (c1 + c3) * FRAC_1_SQRT_2,
            c_minus: (c1 - c3) * FRAC_1_SQRT_2,
            c2,
        }
    }

    /// Full 4×4 density matrix `ΨΨ†`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        self.wavefunction().outer()
    }

    /// `UρU` in the basis `{Ψ_HH, Ψ_HV, Ψ⁻, Ψ_VV}`; row and column 3 are zero
    /// because the antisymmetric Bell state never appears.
    pub fn transformed_density(&self) -> ComplexMatrix {
        let u = symmetric_basis_change();
        &(&u * &self.density_matrix()) * &u
    }

    /// The nonzero 3×3 block of [`Self::transformed_density`], ordered
    /// `(HH, HV, VV)`; its diagonal is `(|C₁|², |C₂|², |C₃|²)`.
    pub fn coherence_matrix(&self) -> ComplexMatrix {
        let t = self.transformed_density();
        let keep = [0, 1, 3];
        ComplexMatrix::from_fn(3, 3, |i, j| t[(keep[i], keep[j])])
    }

    /// Closed-form single-photon reduced density matrix.
    pub fn reduced_density(&self) -> ComplexMatrix {
        let [c1, c2, c3] = self.amps;
        let half_c2 = c2.norm_sqr() / 2.0;
        let off = (c1 * c2.conj() + c2 * c3.conj()) * FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(
            2,
            2,
            vec![re(c1.norm_sqr() + half_c2), off, off.conj(), re(c3.norm_sqr() + half_c2)],
        )
        .expect("2x2")
    }

    /// `2C₁C₃ − C₂²`, whose modulus is the concurrence.
    pub fn concurrence_amplitude(&self) -> C64 {
        let [c1, c2, c3] = self.amps;
        2.0 * c1 * c3 - c2 * c2
    }

    pub fn concurrence(&self) -> f64 {
        self.concurrence_amplitude().norm().min(1.0)
    }

    /// `K = 2 / (2 − |2C₁C₃ − C₂²|²)`.
    pub fn schmidt_k(&self) -> f64 {
        2.0 / (2.0 - self.concurrence_amplitude().norm_sqr())
    }

    /// `λ± = (1 ± √(1 − C²)) / 2`.
    pub fn schmidt_lambdas(&self) -> (f64, f64) {
        let c = self.concurrence();
        let root = (1.0 - c * c).max(0.0).sqrt();
        ((1.0 + root) / 2.0, (1.0 - root) / 2.0)
    }

    pub fn quantify(&self) -> EntanglementReport {
        let (lambda_plus, lambda_minus) = self.schmidt_lambdas();
        EntanglementReport {
            schmidt_k: self.schmidt_k(),
            concurrence: self.concurrence(),
            entropy: linalg::entropy_bits(&[lambda_plus, lambda_minus]),
            lambda_plus,
            lambda_minus,
        }
    }

    /// Wootters concurrence `|⟨Ψ|Ψ̃⟩|` with `Ψ̃ = (σ_y ⊗ σ_y) Ψ*`.
    pub fn spin_flip_concurrence(&self) -> f64 {
        let psi = self.wavefunction();
        spin_flip(&psi).inner(&psi).norm()
    }

    /// Schmidt decomposition `Ψ = Σ √λ ψ(1)ψ(2)`, at most two terms.
    pub fn schmidt_decompose(&self) -> SchmidtDecomposition {
        linalg::symmetric_schmidt(&self.wavefunction(), 2)
            .expect("qutrit wave functions are swap-symmetric")
    }

    pub fn polarization(&self) -> PolarizationReport {
        let [c1, c2, c3] = self.amps;
        let z = c1 * c2.conj() + c2 * c3.conj();
        let xi = [SQRT_2 * z.re, -SQRT_2 * z.im, c1.norm_sqr() - c3.norm_sqr()];
        let degree_p = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        PolarizationReport { xi, degree_p }
    }

    /// Coefficients in the polarization frame turned by `alpha` radians.
    pub fn rotate_basis(&self, alpha: f64) -> Self {
        let [c1, c2, c3] = self.amps;
        let (s, c) = alpha.sin_cos();
        let cs = SQRT_2 * c * s;
        let cos2 = (2.0 * alpha).cos();
        Self {
            amps: [
                c * c * c1 + cs * c2 + s * s * c3,
                -cs * (c1 - c3) + cos2 * c2,
                s * s * c1 - cs * c2 + c * c * c3,
            ],
        }
    }

    /// Three-parameter family of factorable qutrits,
    /// `cos²(φ/2)e^{iφ₁}Ψ_HH + (sinφ/√2)e^{i(φ₁+φ₃)/2}Ψ_HV + sin²(φ/2)e^{iφ₃}Ψ_VV`.
    pub fn non_entangled_family(phi: f64, phi1: f64, phi3: f64) -> Self {
        let half = phi / 2.0;
        Self {
            amps: [
                C64::from_polar(half.cos().powi(2), phi1),
                C64::from_polar(phi.sin() * FRAC_1_SQRT_2, (phi1 + phi3) / 2.0),
                C64::from_polar(half.sin().powi(2), phi3),
            ],
        }
    }

    /// The single Schmidt mode `(cos(φ/2)e^{iφ₁/2}, sin(φ/2)e^{iφ₃/2})` of a
    /// [`Self::non_entangled_family`] member.
    pub fn non_entangled_mode(phi: f64, phi1: f64, phi3: f64) -> ComplexVector {
        let half = phi / 2.0;
        ComplexVector::new(vec![
            C64::from_polar(half.cos(), phi1 / 2.0),
            C64::from_polar(half.sin(), phi3 / 2.0),
        ])
    }

    /// Three-parameter family of maximally entangled qutrits,
    /// `sinφ e^{i(φ₁+φ₃)/2}Ψ_HV + (cosφ/√2)(e^{iφ₁}Ψ_HH − e^{iφ₃}Ψ_VV)`.
    pub fn max_entangled_family(phi: f64, phi1: f64, phi3: f64) -> Self {
        let c = phi.cos() * FRAC_1_SQRT_2;
        Self {
            amps: [
                C64::from_polar(c, phi1),
                C64::from_polar(phi.sin(), (phi1 + phi3) / 2.0),
                -C64::from_polar(c, phi3),
            ],
        }
    }

    /// Real qutrit on the Bell-coefficient circle: given `C₊`, the remaining
    /// weight `1 − C₊²` is split evenly between `C₋` and `C₂`.
    pub fn real_from_c_plus(c_plus: f64) -> Result<Self, StateError> {
        let rest = ((1.0 - c_plus * c_plus).max(0.0) / 2.0).sqrt();
        let bell = BellCoefficients { c_plus: re(c_plus), c_minus: re(rest), c2: re(rest) };
        let q = bell.to_qutrit();
        Self::new(q.amps[0], q.amps[1], q.amps[2])
    }
}

/// The real symmetric orthogonal `U` taking `(HH, HV, VH, VV)` columns to
/// `(Ψ_HH, Ψ_HV, Ψ⁻, Ψ_VV)`.
pub fn symmetric_basis_change() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, s, s, 0.0],
        &[0.0, s, -s, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
}

/// Pauli `σ_y`.
pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
        .expect("2x2")
}

/// `(σ_y ⊗ σ_y) ψ*` for a two-qubit column.
pub fn spin_flip(psi: &ComplexVector) -> ComplexVector {
    let sy = sigma_y();
    sy.kron(&sy).apply(&psi.conj())
}
