//! Entanglement algebra of biphoton qutrits and ququarts.
//!
//! Two photons of a down-converted pair share a symmetric wave function. For
//! frequency-degenerate collinear pairs each photon carries only polarization
//! (`d = 2`) and the pair is a *qutrit*: a superposition of `|2_H⟩`,
//! `|1_H 1_V⟩` and `|2_V⟩`. For frequency non-degenerate pairs each photon
//! carries polarization and frequency (`d = 4`) and the pair is a *ququart*.
//!
//! The crate provides
//!
//! * [`linalg`]: dense complex algebra used as a brute-force oracle
//!   (Kronecker products, partial traces, a Hermitian eigensolver, symmetric
//!   Schmidt decomposition);
//! * [`qutrit`] and [`ququart`]: states, density matrices, closed-form
//!   entanglement quantifiers, Schmidt modes, polarization and basis rotation;
//! * [`measurement`]: the beam-splitter coincidence experiment, ideal or
//!   sampled, with its versioned JSON record format;
//! * [`reconstruct`]: recovery of amplitudes and phases from coincidence
//!   records taken in the natural and the 45°-rotated basis.

pub mod json;
pub mod linalg;
pub mod measurement;
pub mod ququart;
pub mod qutrit;
pub mod reconstruct;
mod state;

pub use num_complex::Complex64 as C64;

pub use linalg::{ComplexMatrix, ComplexVector, SchmidtDecomposition};
pub use measurement::{Basis, CoincidenceRecord, ExperimentConfig, NoiseMode};
pub use ququart::{QuquartLabel, QuquartReport, QuquartState, TwoQubitModelReport};
pub use qutrit::{BellCoefficients, EntanglementReport, PolarizationReport, QutritState};
pub use reconstruct::{MagnitudeEstimate, ReconstructError, ReconstructionResult};
pub use state::{StateError, StateKind, NORM_TOL};
