//! Beam-splitter coincidence experiment.
//!
//! A non-selective beam splitter sends each photon of a pair to channel I
//! or II; a polarizer (and, for ququarts, a frequency filter) in each
//! channel selects one single-photon mode. Pairs that split register a
//! coincidence `σ|σ′` with probability `|Ψ_{σσ′}|²`, so the expected number
//! of `σ|σ′` coincidences out of `N` pairs is `(η/2)·N·|Ψ_{σσ′}|²`.
//!
//! Detector efficiency enters once per coincidence, not once per detector.

mod record;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::ComplexVector;
use crate::ququart::{self, QuquartLabel, QuquartState, MODE_NAMES};
use crate::qutrit::QutritState;

pub use record::{split_key, Basis, CoincidenceRecord, NoiseMode, RecordError, RECORD_SCHEMA};

const QUTRIT_MODES: [&str; 2] = ["H", "V"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("detector efficiency must lie in (0, 1], got {0}")]
    Efficiency(f64),
    #[error("total_pairs must be at least 1")]
    NoPairs,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    total_pairs: u64,
    eta: f64,
    basis: Basis,
    noise: NoiseMode,
    seed: u64,
}

impl ExperimentConfig {
    pub fn new(
        total_pairs: u64,
        eta: f64,
        basis: Basis,
        noise: NoiseMode,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(ConfigError::Efficiency(eta));
        }
        if total_pairs == 0 {
            return Err(ConfigError::NoPairs);
        }
        Ok(Self { total_pairs, eta, basis, noise, seed })
    }

    /// Ideal, natural basis, `η = 1`.
    pub fn ideal(total_pairs: u64) -> Self {
        Self::new(total_pairs, 1.0, Basis::Natural, NoiseMode::Ideal, 0).expect("valid")
    }

    pub fn with_basis(self, basis: Basis) -> Self {
        Self { basis, ..self }
    }

    pub fn with_noise(self, noise: NoiseMode, seed: u64) -> Self {
        Self { noise, seed, ..self }
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn noise(&self) -> NoiseMode {
        self.noise
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Coincidence classes of unordered mode pairs `(a, b)`, `a ≤ b`, over a
/// `d`-mode single-photon space. Each class registers as `a|b` or `b|a`.
struct Layout<'a> {
    d: usize,
    names: &'a [&'a str],
    classes: Vec<(usize, usize)>,
}

impl Layout<'_> {
    fn qutrit() -> Layout<'static> {
        Layout { d: 2, names: &QUTRIT_MODES, classes: vec![(0, 0), (0, 1), (1, 1)] }
    }

    fn ququart() -> Layout<'static> {
        let classes = QuquartLabel::ALL
            .iter()
            .map(|l| {
                let (h, l) = l.modes();
                (h.min(l), h.max(l))
            })
            .collect();
        Layout { d: 4, names: &MODE_NAMES, classes }
    }

    fn key(&self, a: usize, b: usize) -> String {
        format!("{}|{}", self.names[a], self.names[b])
    }

    /// `|Ψ_{ab}|²` for every ordered key.
    fn conditionals(&self, psi: &ComplexVector) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for &(a, b) in &self.classes {
            out.push((self.key(a, b), psi[a * self.d + b].norm_sqr()));
            if a != b {
                out.push((self.key(b, a), psi[b * self.d + a].norm_sqr()));
            }
        }
        out
    }

    fn expected(&self, psi: &ComplexVector, cfg: &ExperimentConfig) -> CoincidenceRecord {
        let scale = cfg.eta / 2.0 * cfg.total_pairs as f64;
        CoincidenceRecord {
            basis: cfg.basis,
            mode: NoiseMode::Ideal,
            eta: cfg.eta,
            total_pairs: cfg.total_pairs,
            seed: None,
            counts: self.conditionals(psi).into_iter().map(|(k, w)| (k, scale * w)).collect(),
        }
    }

    /// Binomially thinned coincidence total, multinomial over classes by
    /// sequential binomials, then an even split of each mixed class over
    /// its two orderings.
    fn sampled(&self, psi: &ComplexVector, cfg: &ExperimentConfig) -> CoincidenceRecord {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut draw = |n: u64, p: f64| -> u64 {
            let p = p.clamp(0.0, 1.0);
            Binomial::new(n, p).expect("p clamped to [0, 1]").sample(&mut rng)
        };
        let mut remaining = draw(cfg.total_pairs, cfg.eta / 2.0);
        let probs: Vec<f64> = self
            .classes
            .iter()
            .map(|&(a, b)| {
                let w = psi[a * self.d + b].norm_sqr();
                if a == b { w } else { w + psi[b * self.d + a].norm_sqr() }
            })
            .collect();
        let mut mass_left: f64 = probs.iter().sum();
        let mut counts = BTreeMap::new();
        for (i, (&(a, b), &p)) in self.classes.iter().zip(&probs).enumerate() {
            let n = if i + 1 == probs.len() {
                remaining
            } else if mass_left > 0.0 {
                draw(remaining, p / mass_left)
            } else {
                0
            };
            remaining -= n;
            mass_left -= p;
            if a == b {
                counts.insert(self.key(a, a), n as f64);
            } else {
                let first = draw(n, 0.5);
                counts.insert(self.key(a, b), first as f64);
                counts.insert(self.key(b, a), (n - first) as f64);
            }
        }
        CoincidenceRecord {
            basis: cfg.basis,
            mode: NoiseMode::Sampled,
            eta: cfg.eta,
            total_pairs: cfg.total_pairs,
            seed: Some(cfg.seed),
            counts,
        }
    }
}

fn qutrit_in_basis(q: &QutritState, basis: Basis) -> QutritState {
    match basis {
        Basis::Natural => *q,
        Basis::Rotated45 => q.rotate_basis(std::f64::consts::FRAC_PI_4),
    }
}

fn ququart_in_basis(s: &QuquartState, basis: Basis) -> QuquartState {
    match basis {
        Basis::Natural => *s,
        Basis::Rotated45 => s.rotate_basis_45(),
    }
}

/// Qutrit after the beam splitter: `Ψ ⊗ ½(1,−1)⊗(1,−1)` in the angular
/// variables. The angular factor is a product, so entanglement is unchanged.
pub fn beam_splitter_wavefunction(q: &QutritState) -> ComplexVector {
    let a = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    let ang = ComplexVector::from_reals(&[a[0] * a[0], a[0] * a[1], a[1] * a[0], a[1] * a[1]]);
    ququart::polarization_angular_product(&q.wavefunction(), &ang)
}

/// Expected qutrit coincidence counts for `cfg.basis`.
pub fn expected_coincidences(q: &QutritState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    Layout::qutrit().expected(&qutrit_in_basis(q, cfg.basis).wavefunction(), cfg)
}

/// One seeded draw of qutrit coincidence counts.
pub fn sample_coincidences(q: &QutritState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    Layout::qutrit().sampled(&qutrit_in_basis(q, cfg.basis).wavefunction(), cfg)
}

/// Expected ququart coincidence counts; frequency filters are ideal.
pub fn expected_coincidences_ququart(s: &QuquartState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    Layout::ququart().expected(&ququart_in_basis(s, cfg.basis).wavefunction(), cfg)
}

pub fn sample_coincidences_ququart(s: &QuquartState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    Layout::ququart().sampled(&ququart_in_basis(s, cfg.basis).wavefunction(), cfg)
}

/// Dispatches on `cfg.noise`.
pub fn simulate_qutrit(q: &QutritState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    match cfg.noise {
        NoiseMode::Ideal => expected_coincidences(q, cfg),
        NoiseMode::Sampled => sample_coincidences(q, cfg),
    }
}

pub fn simulate_ququart(s: &QuquartState, cfg: &ExperimentConfig) -> CoincidenceRecord {
    match cfg.noise {
        NoiseMode::Ideal => expected_coincidences_ququart(s, cfg),
        NoiseMode::Sampled => sample_coincidences_ququart(s, cfg),
    }
}
