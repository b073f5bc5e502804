use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `Σ|Cᵢ|² = 1` for amplitudes accepted as already normalized.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("all amplitudes are zero")]
    ZeroState,
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("expected {expected} amplitudes, got {got}")]
    WrongLength { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Qutrit,
    Ququart,
}

impl StateKind {
    pub fn amplitude_count(self) -> usize {
        match self {
            StateKind::Qutrit => 3,
            StateKind::Ququart => 4,
        }
    }

    /// Single-photon Hilbert space dimension.
    pub fn photon_dim(self) -> usize {
        match self {
            StateKind::Qutrit => 2,
            StateKind::Ququart => 4,
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Qutrit => "qutrit",
            StateKind::Ququart => "ququart",
        })
    }
}

impl FromStr for StateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qutrit" => Ok(StateKind::Qutrit),
            "ququart" => Ok(StateKind::Ququart),
            other => Err(format!("unknown state kind `{other}`")),
        }
    }
}

/// Scale to unit norm without touching the global phase.
pub(crate) fn normalize<const N: usize>(amps: [C64; N]) -> Result<[C64; N], StateError> {
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(StateError::NonFinite);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(StateError::ZeroState);
    }
    Ok(amps.map(|z| z / norm))
}

/// Smallest distance between two amplitude lists over a global phase.
pub(crate) fn phase_distance(a: &[C64], b: &[C64]) -> f64 {
    let overlap: C64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y * phase).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
