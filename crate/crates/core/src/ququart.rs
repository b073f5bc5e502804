//! Biphoton ququarts: two photons of different frequencies, each carrying
//! polarization and frequency, so each photon lives in `d = 4`.
//!
//! Single-photon modes are ordered `(Hh, Hl, Vh, Vl)`. The four basis
//! states pair a high-frequency mode with a low-frequency one:
//! `Ψ_HH ~ {Hh, Hl}`, `Ψ_HV ~ {Hh, Vl}`, `Ψ_VH ~ {Vh, Hl}`, `Ψ_VV ~ {Vh, Vl}`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::{self, ComplexMatrix, ComplexVector, SchmidtDecomposition, Subsystem};
use crate::qutrit::QutritState;
use crate::state::{normalize, phase_distance, StateError};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Single-photon mode names in index order.
pub const MODE_NAMES: [&str; 4] = ["Hh", "Hl", "Vh", "Vl"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuquartLabel {
    HH,
    HV,
    VH,
    VV,
}

impl QuquartLabel {
    pub const ALL: [QuquartLabel; 4] =
        [QuquartLabel::HH, QuquartLabel::HV, QuquartLabel::VH, QuquartLabel::VV];

    /// `(high-frequency mode, low-frequency mode)` indices.
    pub fn modes(self) -> (usize, usize) {
        match self {
            QuquartLabel::HH => (0, 1),
            QuquartLabel::HV => (0, 3),
            QuquartLabel::VH => (2, 1),
            QuquartLabel::VV => (2, 3),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for QuquartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuquartLabel::HH => "HH",
            QuquartLabel::HV => "HV",
            QuquartLabel::VH => "VH",
            QuquartLabel::VV => "VV",
        })
    }
}

impl FromStr for QuquartLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        QuquartLabel::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| format!("unknown ququart label `{s}`"))
    }
}

/// Symmetrized basis vector `(e_h ⊗ e_l + e_l ⊗ e_h)/√2`.
pub fn basis_wavefunction(label: QuquartLabel) -> ComplexVector {
    let (h, l) = label.modes();
    let mut v = ComplexVector::zeros(16);
    v[h * 4 + l] = C64::new(FRAC_1_SQRT_2, 0.0);
    v[l * 4 + h] = C64::new(FRAC_1_SQRT_2, 0.0);
    v
}

/// A normalized ququart `(C₁, C₂, C₃, C₄)` over `(Ψ_HH, Ψ_HV, Ψ_VH, Ψ_VV)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuquartState {
    amps: [C64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuquartReport {
    pub schmidt_k: f64,
    pub i_concurrence: f64,
    pub entropy: f64,
    /// Reduced-matrix eigenvalues, descending.
    pub lambdas: [f64; 4],
}

/// Quantifiers of the distinguishable-qubit treatment of the same
/// amplitudes: `C₁|HH⟩ + C₂|HV⟩ + C₃|VH⟩ + C₄|VV⟩` with `d = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitModelReport {
    pub k_2qb: f64,
    pub c_2qb: f64,
    pub rho_r_2qb: ComplexMatrix,
}

impl QuquartState {
    pub fn new(c1: C64, c2: C64, c3: C64, c4: C64) -> Result<Self, StateError> {
        Ok(Self { amps: normalize([c1, c2, c3, c4])? })
    }

    pub fn from_reals(c1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self, StateError> {
        let r = |x| C64::new(x, 0.0);
        Self::new(r(c1), r(c2), r(c3), r(c4))
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self, StateError> {
        match amps {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => Err(StateError::WrongLength { expected: 4, got: amps.len() }),
        }
    }

    pub fn from_polar(magnitudes: [f64; 4], phases: [f64; 4]) -> Result<Self, StateError> {
        let a = [0, 1, 2, 3].map(|i| C64::from_polar(magnitudes[i], phases[i]));
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn basis(label: QuquartLabel) -> Self {
        let mut amps = [ZERO; 4];
        amps[label.index()] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amps
    }

    pub fn magnitudes(&self) -> [f64; 4] {
        self.amps.map(|z| z.norm())
    }

    pub fn phases(&self) -> [f64; 4] {
        self.amps.map(|z| z.arg())
    }

    pub fn phase_distance(&self, other: &Self) -> f64 {
        phase_distance(&self.amps, &other.amps)
    }

    /// `C₁C₄ − C₂C₃`, the only combination entering the quantifiers.
    pub fn delta(&self) -> C64 {
        let [c1, c2, c3, c4] = self.amps;
        c1 * c4 - c2 * c3
    }

    /// The 16-row wave function `Σ Cᵢ Ψᵢ`.
    pub fn wavefunction(&self) -> ComplexVector {
        let mut v = ComplexVector::zeros(16);
        for (label, c) in QuquartLabel::ALL.into_iter().zip(self.amps) {
            let (h, l) = label.modes();
            let x = c * FRAC_1_SQRT_2;
            v[h * 4 + l] = x;
            v[l * 4 + h] = x;
        }
        v
    }

    /// 16×16 `ΨΨ†`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        self.wavefunction().outer()
    }

    /// Closed-form 4×4 single-photon reduced density matrix. Entries that
    /// mix high and low frequency vanish.
    pub fn reduced_density(&self) -> ComplexMatrix {
        let [c1, c2, c3, c4] = self.amps;
        let h = 0.5;
        let mut r = ComplexMatrix::zeros(4, 4);
        r[(0, 0)] = C64::new(h * (c1.norm_sqr() + c2.norm_sqr()), 0.0);
        r[(1, 1)] = C64::new(h * (c1.norm_sqr() + c3.norm_sqr()), 0.0);
        r[(2, 2)] = C64::new(h * (c3.norm_sqr() + c4.norm_sqr()), 0.0);
        r[(3, 3)] = C64::new(h * (c2.norm_sqr() + c4.norm_sqr()), 0.0);
        let high = h * (c1 * c3.conj() + c2 * c4.conj());
        let low = h * (c1 * c2.conj() + c3 * c4.conj());
        r[(0, 2)] = high;
        r[(2, 0)] = high.conj();
        r[(1, 3)] = low;
        r[(3, 1)] = low.conj();
        r
    }

    /// `K = 2 / (1 − 2|C₁C₄ − C₂C₃|²)`.
    pub fn schmidt_k(&self) -> f64 {
        2.0 / (1.0 - 2.0 * self.delta().norm_sqr())
    }

    /// `C_I = √(1 + 2|C₁C₄ − C₂C₃|²)`.
    pub fn i_concurrence(&self) -> f64 {
        (1.0 + 2.0 * self.delta().norm_sqr()).sqrt()
    }

    /// Reduced-matrix eigenvalues, descending. Each of `(1 ± s)/4` with
    /// `s = √(1 − 4|Δ|²)` appears twice: the high- and low-frequency blocks
    /// share their spectrum.
    pub fn lambdas(&self) -> [f64; 4] {
        let s = (1.0 - 4.0 * self.delta().norm_sqr()).max(0.0).sqrt();
        let (hi, lo) = ((1.0 + s) / 4.0, (1.0 - s) / 4.0);
        [hi, hi, lo, lo]
    }

    pub fn quantify(&self) -> QuquartReport {
        let lambdas = self.lambdas();
        QuquartReport {
            schmidt_k: self.schmidt_k(),
            i_concurrence: self.i_concurrence(),
            entropy: linalg::entropy_bits(&lambdas),
            lambdas,
        }
    }

    pub fn two_qubit_model(&self) -> TwoQubitModelReport {
        let [c1, c2, c3, c4] = self.amps;
        let off = c1 * c3.conj() + c2 * c4.conj();
        let rho_r_2qb = ComplexMatrix::from_rows(
            2,
            2,
            vec![
                C64::new(c1.norm_sqr() + c2.norm_sqr(), 0.0),
                off,
                off.conj(),
                C64::new(c3.norm_sqr() + c4.norm_sqr(), 0.0),
            ],
        )
        .expect("2x2");
        let d = self.delta().norm();
        TwoQubitModelReport { k_2qb: 1.0 / (1.0 - 2.0 * d * d), c_2qb: 2.0 * d, rho_r_2qb }
    }

    /// Schmidt decomposition over the 4-dimensional single-photon space;
    /// always at least two terms.
    pub fn schmidt_decompose(&self) -> SchmidtDecomposition {
        linalg::symmetric_schmidt(&self.wavefunction(), 4)
            .expect("ququart wave functions are swap-symmetric")
    }

    /// Coefficients after turning both polarizers by 45°.
    pub fn rotate_basis_45(&self) -> Self {
        let [c1, c2, c3, c4] = self.amps;
        Self {
            amps: [
                0.5 * (c1 + c2 + c3 + c4),
                0.5 * (-c1 + c2 - c3 + c4),
                0.5 * (-c1 - c2 + c3 + c4),
                0.5 * (c1 - c2 - c3 + c4),
            ],
        }
    }
}

/// `(cosφ, 0, 0, sinφ)` with its closed-form `K = 4/(1 + cos²2φ)` and
/// `S_r = 1 − 2(cos²φ log₂|cosφ| + sin²φ log₂|sinφ|)`.
pub fn family_psi_phi(phi: f64) -> (QuquartState, f64, f64) {
    let (s, c) = phi.sin_cos();
    let state = QuquartState { amps: [C64::new(c, 0.0), ZERO, ZERO, C64::new(s, 0.0)] };
    let k = 4.0 / (1.0 + (2.0 * phi).cos().powi(2));
    let xlog = |x: f64| if x == 0.0 { 0.0 } else { x * x * x.abs().log2() };
    let entropy = 1.0 - 2.0 * (xlog(c) + xlog(s));
    (state, k, entropy)
}

/// `(cosφ/√2, ½, ½, sinφ/√2)`; not symmetric under `φ → π − φ`.
pub fn family_psi_phi_prime(phi: f64) -> QuquartState {
    let (s, c) = phi.sin_cos();
    QuquartState {
        amps: [
            C64::new(c * FRAC_1_SQRT_2, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(s * FRAC_1_SQRT_2, 0.0),
        ],
    }
}

/// Joins a two-photon polarization column (4 rows, `(σ₁, σ₂)`) with a
/// two-photon angular column (4 rows, `(θ₁, θ₂)`) into one 16-row column
/// over single-photon modes `(σ, θ)`, index `((σ₁·2+θ₁)·4 + σ₂·2+θ₂)`.
pub fn polarization_angular_product(pol: &ComplexVector, ang: &ComplexVector) -> ComplexVector {
    assert_eq!(pol.len(), 4, "polarization column has 4 rows");
    assert_eq!(ang.len(), 4, "angular column has 4 rows");
    let mut v = ComplexVector::zeros(16);
    for s1 in 0..2 {
        for s2 in 0..2 {
            for t1 in 0..2 {
                for t2 in 0..2 {
                    v[(s1 * 2 + t1) * 4 + s2 * 2 + t2] = pol[s1 * 2 + s2] * ang[t1 * 2 + t2];
                }
            }
        }
    }
    v
}

/// Qutrit after a beam splitter with unsplit pairs discarded: the angular
/// factor becomes `(δ_{θ₁,0}δ_{θ₂,90°} + δ_{θ₁,90°}δ_{θ₂,0})/√2`. Returns the
/// 16-row state and its Schmidt parameter from a full partial trace.
pub fn qutrit_to_ququart_postselect(q: &QutritState) -> (ComplexVector, f64) {
    let ang = ComplexVector::from_reals(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
    let psi = polarization_angular_product(&q.wavefunction(), &ang);
    let rho = linalg::partial_trace(&psi.outer(), 4, Subsystem::Second).expect("16 = 4·4");
    (psi, 1.0 / rho.purity())
}

/// `C_I = √(2(1 − 1/K))`.
pub fn i_concurrence_from_k(k: f64) -> f64 {
    (2.0 * (1.0 - 1.0 / k)).max(0.0).sqrt()
}

/// `K` from a value of `|C₁C₄ − C₂C₃|²`.
pub fn schmidt_k_from_delta_sqr(delta_sqr: f64) -> f64 {
    2.0 / (1.0 - 2.0 * delta_sqr)
}
