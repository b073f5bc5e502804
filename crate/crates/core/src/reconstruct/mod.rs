//! Two-basis tomography: amplitudes and phases from coincidence records
//! taken with the polarizers in the natural and in the 45°-rotated basis.
//!
//! The natural-basis record fixes `|Cᵢ|`; the rotated record fixes
//! `|Cᵢ(45°)|`, which depend on cosines of phase differences. Solving for
//! the phases is a small nonlinear system with a finite set of roots;
//! complex conjugation of the state is always a root, and the cosines
//! usually admit a further, physically different branch. Every root within
//! tolerance is returned.

mod solver;

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::json::complex_list;
use crate::measurement::{Basis, CoincidenceRecord, NoiseMode};
use crate::ququart::{self, QuquartState, MODE_NAMES};
use crate::qutrit::QutritState;
use crate::state::{phase_distance, StateKind};

pub const RESULT_SCHEMA: &str = "recon/1";
/// No root with a residual above this is accepted.
pub const RESIDUAL_CEILING: f64 = 0.05;
/// Roots whose residual exceeds the best by less than
/// `ALTERNATE_WINDOW + 3σ` are reported as alternates.
pub const ALTERNATE_WINDOW: f64 = 1e-6;
pub const IDEAL_ZERO_MAGNITUDE: f64 = 1e-4;
/// Relative renormalization beyond which a warning is attached.
pub const RENORMALIZATION_WARNING: f64 = 0.05;
const DEDUP_DISTANCE: f64 = 1e-6;
const QUTRIT_GRID: usize = 64;
const QUQUART_GRID: usize = 32;
const MAX_SEEDS: usize = 64;

pub const GAUGE_QUTRIT: &str = "phi2=0";
pub const GAUGE_QUQUART: &str = "sum(phi)=0";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("{basis} record lacks setting `{key}`")]
    IncompleteRecord { basis: Basis, key: String },
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("records are inconsistent: {detail}")]
    Inconsistent { detail: String, clipped: Option<(f64, f64)> },
    #[error("phases are not observable; partial result attached")]
    PhaseUnobservable { partial: Box<ReconstructionResult> },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
}

/// Magnitudes read from one record.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMagnitudes {
    pub magnitudes: Vec<f64>,
    /// Factor applied to reach unit squared sum; `1` for clean records.
    pub renormalization: f64,
    /// Single-photon probabilities, in mode order.
    pub singles: Vec<f64>,
    pub coincidences: f64,
    pub mode: NoiseMode,
}

/// Ordered coincidence keys whose probabilities add up to `|Cᵢ|²`.
fn amplitude_keys(kind: StateKind) -> Vec<Vec<String>> {
    match kind {
        StateKind::Qutrit => vec![
            vec!["H|H".into()],
            vec!["H|V".into(), "V|H".into()],
            vec!["V|V".into()],
        ],
        StateKind::Ququart => ququart::QuquartLabel::ALL
            .iter()
            .map(|l| {
                let (h, lo) = l.modes();
                vec![
                    format!("{}|{}", MODE_NAMES[h], MODE_NAMES[lo]),
                    format!("{}|{}", MODE_NAMES[lo], MODE_NAMES[h]),
                ]
            })
            .collect(),
    }
}

/// `|Cᵢ|` from one record. The two orderings of a mixed pair are added,
/// which is twice their average.
pub fn magnitudes_from_record(
    rec: &CoincidenceRecord,
    kind: StateKind,
) -> Result<BasisMagnitudes, ReconstructError> {
    if let Some((key, n)) = rec.counts.iter().find(|(_, &n)| n < 0.0) {
        return Err(ReconstructError::MalformedRecord(format!("negative count {n} for `{key}`")));
    }
    let keys = amplitude_keys(kind);
    for key in keys.iter().flatten() {
        if !rec.counts.contains_key(key) {
            return Err(ReconstructError::IncompleteRecord { basis: rec.basis, key: key.clone() });
        }
    }
    let coincidences = rec.coincidence_total();
    if coincidences <= 0.0 {
        return Err(ReconstructError::MalformedRecord("record has no coincidences".into()));
    }
    let w = rec.conditional_probabilities();
    let squares: Vec<f64> = keys.iter().map(|group| group.iter().map(|k| w[k]).sum()).collect();
    let total: f64 = squares.iter().sum();
    if total <= 0.0 {
        return Err(ReconstructError::MalformedRecord("all amplitude settings are empty".into()));
    }
    let singles_map = rec.single_particle();
    let names: &[&str] = match kind {
        StateKind::Qutrit => &["H", "V"],
        StateKind::Ququart => &MODE_NAMES,
    };
    Ok(BasisMagnitudes {
        magnitudes: squares.iter().map(|s| (s / total).sqrt()).collect(),
        renormalization: 1.0 / total,
        singles: names.iter().map(|n| singles_map.get(*n).copied().unwrap_or(0.0)).collect(),
        coincidences,
        mode: rec.mode,
    })
}

/// Magnitudes in both bases plus what the solver needs to know about noise.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeEstimate {
    pub kind: StateKind,
    pub magnitudes: Vec<f64>,
    pub magnitudes45: Vec<f64>,
    pub singles: Vec<f64>,
    pub singles45: Vec<f64>,
    pub renormalization: [f64; 2],
    /// Statistical scale `1/√N_coinc` of the smaller sampled record; zero
    /// for ideal records.
    pub noise_scale: f64,
}

impl MagnitudeEstimate {
    /// Builds from one natural and one rotated record, in either order.
    pub fn from_records(a: &CoincidenceRecord, b: &CoincidenceRecord) -> Result<Self, ReconstructError> {
        let (nat, rot) = match (a.basis, b.basis) {
            (Basis::Natural, Basis::Rotated45) => (a, b),
            (Basis::Rotated45, Basis::Natural) => (b, a),
            (x, y) => {
                return Err(ReconstructError::BasisMismatch(format!(
                    "need one natural and one rotated45 record, got {x} and {y}"
                )))
            }
        };
        let kind = nat.infer_kind().ok_or_else(|| {
            ReconstructError::MalformedRecord("cannot tell qutrit from ququart keys".into())
        })?;
        match rot.infer_kind() {
            Some(k) if k == kind => {}
            other => {
                return Err(ReconstructError::KindMismatch(format!(
                    "natural record is {kind}, rotated record is {}",
                    other.map_or("unrecognized".to_string(), |k| k.to_string())
                )))
            }
        }
        let n = magnitudes_from_record(nat, kind)?;
        let r = magnitudes_from_record(rot, kind)?;
        let sigma = |m: &BasisMagnitudes| match m.mode {
            NoiseMode::Ideal => 0.0,
            NoiseMode::Sampled => 1.0 / m.coincidences.sqrt(),
        };
        Ok(Self {
            kind,
            noise_scale: sigma(&n).max(sigma(&r)),
            magnitudes: n.magnitudes,
            magnitudes45: r.magnitudes,
            singles: n.singles,
            singles45: r.singles,
            renormalization: [n.renormalization, r.renormalization],
        })
    }

    /// Below this a magnitude counts as zero.
    pub fn zero_threshold(&self) -> f64 {
        if self.noise_scale > 0.0 { 3.0 * self.noise_scale } else { IDEAL_ZERO_MAGNITUDE }
    }

    fn targets45(&self) -> Vec<f64> {
        self.magnitudes45.iter().map(|a| a * a).collect()
    }
}

/// One root of the phase equations.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub amplitudes: Vec<C64>,
    pub residual: f64,
}

impl Solution {
    pub fn schmidt_k(&self, kind: StateKind) -> f64 {
        match kind {
            StateKind::Qutrit => qutrit_of(&self.amplitudes).schmidt_k(),
            StateKind::Ququart => ququart_of(&self.amplitudes).schmidt_k(),
        }
    }

    /// `C` for qutrits, `C_I` for ququarts.
    pub fn concurrence(&self, kind: StateKind) -> f64 {
        match kind {
            StateKind::Qutrit => qutrit_of(&self.amplitudes).concurrence(),
            StateKind::Ququart => ququart_of(&self.amplitudes).i_concurrence(),
        }
    }
}

fn qutrit_of(a: &[C64]) -> QutritState {
    QutritState::from_slice(a).expect("reconstructed amplitudes are finite and nonzero")
}

fn ququart_of(a: &[C64]) -> QuquartState {
    QuquartState::from_slice(a).expect("reconstructed amplitudes are finite and nonzero")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub kind: StateKind,
    /// Canonical root: smallest phases mod 2π, compared lexicographically.
    pub best: Solution,
    pub alternates: Vec<Solution>,
    pub gauge: &'static str,
    pub warnings: Vec<String>,
}

impl ReconstructionResult {
    pub fn amplitudes(&self) -> &[C64] {
        &self.best.amplitudes
    }

    pub fn residual(&self) -> f64 {
        self.best.residual
    }

    pub fn qutrit(&self) -> Option<QutritState> {
        (self.kind == StateKind::Qutrit).then(|| qutrit_of(&self.best.amplitudes))
    }

    pub fn ququart(&self) -> Option<QuquartState> {
        (self.kind == StateKind::Ququart).then(|| ququart_of(&self.best.amplitudes))
    }

    /// The canonical root followed by the alternates.
    pub fn solutions(&self) -> impl Iterator<Item = &Solution> {
        std::iter::once(&self.best).chain(&self.alternates)
    }

    pub fn schmidt_k(&self) -> f64 {
        self.best.schmidt_k(self.kind)
    }

    pub fn concurrence(&self) -> f64 {
        self.best.concurrence(self.kind)
    }

    /// Whether some root equals `truth` or its complex conjugate up to a
    /// global phase.
    pub fn contains(&self, truth: &[C64], tol: f64) -> bool {
        let conj: Vec<C64> = truth.iter().map(|z| z.conj()).collect();
        self.solutions().any(|s| {
            phase_distance(&s.amplitudes, truth) <= tol || phase_distance(&s.amplitudes, &conj) <= tol
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": RESULT_SCHEMA,
            "kind": self.kind,
            "amplitudes": complex_list(&self.best.amplitudes),
            "residual": self.best.residual,
            "alternates": self.alternates.iter().map(|s| json!({
                "amplitudes": complex_list(&s.amplitudes),
                "residual": s.residual,
            })).collect::<Vec<_>>(),
            "gauge": self.gauge,
            "warnings": self.warnings,
        })
    }
}

/// Qutrit phase equations: `|C₁ − C₃|²/2 = |C₂(45°)|²` and
/// `√2 Re((C₁ + C₃)C₂*) = |C₁(45°)|² − |C₃(45°)|²`.
pub fn qutrit_equations(c: &[C64], t: &[f64]) -> [f64; 2] {
    [
        (c[0] - c[2]).norm_sqr() / 2.0 - t[1],
        SQRT_2 * ((c[0] + c[2]) * c[1].conj()).re - (t[0] - t[2]),
    ]
}

/// Ququart phase equations, pairing `|Cᵢ(45°)|²`:
/// `Re(C₁C₃*) + Re(C₂C₄*) = t₁ + t₂ − ½`,
/// `Re(C₁C₂*) + Re(C₃C₄*) = t₁ + t₃ − ½`,
/// `Re(C₁C₄*) + Re(C₂C₃*) = t₁ + t₄ − ½`.
pub fn ququart_equations(c: &[C64], t: &[f64]) -> [f64; 3] {
    let re = |a: C64, b: C64| (a * b.conj()).re;
    [
        re(c[0], c[2]) + re(c[1], c[3]) - (t[0] + t[1] - 0.5),
        re(c[0], c[1]) + re(c[2], c[3]) - (t[0] + t[2] - 0.5),
        re(c[0], c[3]) + re(c[1], c[2]) - (t[0] + t[3] - 0.5),
    ]
}

/// Root-mean-square mismatch of `amplitudes` against the rotated-basis data.
pub fn evaluate_residual(m: &MagnitudeEstimate, amplitudes: &[C64]) -> f64 {
    let t = m.targets45();
    let e: Vec<f64> = match m.kind {
        StateKind::Qutrit => qutrit_equations(amplitudes, &t).to_vec(),
        StateKind::Ququart => ququart_equations(amplitudes, &t).to_vec(),
    };
    (e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64).sqrt()
}

fn renormalization_warnings(m: &MagnitudeEstimate) -> Vec<String> {
    let mut w = Vec::new();
    for (factor, basis) in m.renormalization.iter().zip(["natural", "rotated45"]) {
        if (factor - 1.0).abs() > RENORMALIZATION_WARNING {
            w.push(format!("renormalized_{basis}:{factor}"));
        }
    }
    w
}

fn phase_key(a: &[C64]) -> Vec<f64> {
    a.iter().map(|z| if z.norm() == 0.0 { 0.0 } else { z.arg().rem_euclid(TAU) }).collect()
}

/// Shared solver: magnitudes are fixed, phases of `free` amplitudes are
/// unknown, the phase of `reference` is zero, and `gauge` maps a root to the
/// reported phase convention.
fn solve_phases(
    m: &MagnitudeEstimate,
    mags: &[f64],
    free: &[usize],
    grid: usize,
    extra: Vec<Vec<f64>>,
    gauge: impl Fn(Vec<C64>) -> Vec<C64>,
) -> Result<(Solution, Vec<Solution>), ReconstructError> {
    let t = m.targets45();
    let fill = |x: &[f64], c: &mut [C64]| {
        for (ci, &a) in c.iter_mut().zip(mags) {
            *ci = C64::new(a, 0.0);
        }
        for (&i, &phi) in free.iter().zip(x) {
            c[i] = C64::from_polar(mags[i], phi);
        }
    };
    let amps = |x: &[f64]| -> Vec<C64> {
        let mut c = vec![C64::new(0.0, 0.0); mags.len()];
        fill(x, &mut c);
        c
    };
    let eqs = match m.kind {
        StateKind::Qutrit => 2,
        StateKind::Ququart => 3,
    };
    let minima = solver::solve(free.len(), eqs, grid, MAX_SEEDS, extra, |x, r| {
        let mut buf = [C64::new(0.0, 0.0); 4];
        let c = &mut buf[..mags.len()];
        fill(x, c);
        match m.kind {
            StateKind::Qutrit => r.copy_from_slice(&qutrit_equations(c, &t)),
            StateKind::Ququart => r.copy_from_slice(&ququart_equations(c, &t)),
        }
    });
    let best = minima.first().map_or(f64::INFINITY, |s| s.rms);
    if best > RESIDUAL_CEILING {
        return Err(ReconstructError::Inconsistent {
            detail: format!("best phase residual {best:.3e} exceeds {RESIDUAL_CEILING}"),
            clipped: None,
        });
    }
    let window = best + ALTERNATE_WINDOW + 3.0 * m.noise_scale;
    let mut kept: Vec<Solution> = Vec::new();
    for s in minima.into_iter().filter(|s| s.rms <= window) {
        let a = gauge(amps(&s.x));
        let residual = evaluate_residual(m, &a);
        if let Some(prev) = kept.iter_mut().find(|k| phase_distance(&k.amplitudes, &a) < DEDUP_DISTANCE) {
            if residual < prev.residual {
                *prev = Solution { amplitudes: a, residual };
            }
            continue;
        }
        kept.push(Solution { amplitudes: a, residual });
    }
    kept.sort_by(|a, b| {
        let (ka, kb) = (phase_key(&a.amplitudes), phase_key(&b.amplitudes));
        ka.iter()
            .zip(&kb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let best = kept.remove(0);
    Ok((best, kept))
}

/// More distinct roots than isolated solutions of these systems produce;
/// beyond it the roots sample a continuous family.
pub const ISOLATED_ROOT_LIMIT: usize = 16;

/// Warning attached when the data leaves a continuous family of states.
pub const WARNING_NOT_ISOLATED: &str = "roots_not_isolated";

fn continuum_warning(warnings: &mut Vec<String>, alternates: &[Solution]) {
    if alternates.len() + 1 > ISOLATED_ROOT_LIMIT {
        warnings.push(WARNING_NOT_ISOLATED.into());
    }
}

fn real_state(mags: &[f64]) -> Vec<C64> {
    mags.iter().map(|&a| C64::new(a, 0.0)).collect()
}

/// Qutrit phases in the gauge `φ₂ = 0`.
///
/// With `|C₂| ≈ 0` the second equation is void and only `cos(φ₁ − φ₃)` is
/// measured; that still fixes the quantifiers, since `C = 2|C₁C₃|`, and is
/// returned as a partial result inside [`ReconstructError::PhaseUnobservable`].
pub fn qutrit_phases(m: &MagnitudeEstimate) -> Result<ReconstructionResult, ReconstructError> {
    if m.kind != StateKind::Qutrit {
        return Err(ReconstructError::KindMismatch(format!("expected qutrit data, got {}", m.kind)));
    }
    let thr = m.zero_threshold();
    let mags: Vec<f64> = m.magnitudes.iter().map(|&a| if a < thr { 0.0 } else { a }).collect();
    let mags = renormalize(mags);
    let nonzero: Vec<usize> = (0..3).filter(|&i| mags[i] > 0.0).collect();
    let mut warnings = renormalization_warnings(m);
    let result = |best: Solution, alternates, warnings| ReconstructionResult {
        kind: StateKind::Qutrit,
        best,
        alternates,
        gauge: GAUGE_QUTRIT,
        warnings,
    };

    if nonzero.len() == 1 {
        let amplitudes = real_state(&mags);
        let residual = evaluate_residual(m, &amplitudes);
        warnings.push("phases_irrelevant".into());
        return Ok(result(Solution { amplitudes, residual }, vec![], warnings));
    }
    if mags[1] == 0.0 {
        // Only φ₁ − φ₃ enters; fix φ₁ = 0 and solve for φ₃.
        let (best, alternates) = solve_phases(m, &mags, &[2], QUTRIT_GRID, vec![], |a| a)?;
        continuum_warning(&mut warnings, &alternates);
        warnings.push("phase_unobservable:C2=0".into());
        let partial = ReconstructionResult { gauge: "phi1=0", ..result(best, alternates, warnings) };
        return Err(ReconstructError::PhaseUnobservable { partial: Box::new(partial) });
    }
    let free: Vec<usize> = nonzero.iter().copied().filter(|&i| i != 1).collect();
    let extra = if nonzero.len() == 3 { qutrit_branch_seeds(&mags, &m.targets45()) } else { vec![] };
    let (best, alternates) = solve_phases(m, &mags, &free, QUTRIT_GRID, extra, |a| a)?;
    continuum_warning(&mut warnings, &alternates);
    Ok(result(best, alternates, warnings))
}

/// Ququart phases in the gauge `φ₁ + φ₂ + φ₃ + φ₄ = 0`. The solver works
/// with phases relative to the last nonzero amplitude and shifts afterwards,
/// which avoids the four gauge copies that differ by multiples of `π/2`.
pub fn ququart_phases(m: &MagnitudeEstimate) -> Result<ReconstructionResult, ReconstructError> {
    if m.kind != StateKind::Ququart {
        return Err(ReconstructError::KindMismatch(format!("expected ququart data, got {}", m.kind)));
    }
    let thr = m.zero_threshold();
    let mags: Vec<f64> = m.magnitudes.iter().map(|&a| if a < thr { 0.0 } else { a }).collect();
    let mags = renormalize(mags);
    let nonzero: Vec<usize> = (0..4).filter(|&i| mags[i] > 0.0).collect();
    let mut warnings = renormalization_warnings(m);
    let result = |best: Solution, alternates, warnings| ReconstructionResult {
        kind: StateKind::Ququart,
        best,
        alternates,
        gauge: GAUGE_QUQUART,
        warnings,
    };

    if nonzero.len() == 1 {
        let amplitudes = real_state(&mags);
        let residual = evaluate_residual(m, &amplitudes);
        warnings.push("phases_irrelevant".into());
        return Ok(result(Solution { amplitudes, residual }, vec![], warnings));
    }
    let reference = *nonzero.last().expect("at least two nonzero");
    let free: Vec<usize> = nonzero.iter().copied().filter(|&i| i != reference).collect();
    let count = nonzero.len() as f64;
    let gauge = |a: Vec<C64>| -> Vec<C64> {
        let sum: f64 = a.iter().filter(|z| z.norm() > 0.0).map(|z| z.arg()).sum();
        let shift = C64::from_polar(1.0, -sum / count);
        a.into_iter().map(|z| z * shift).collect()
    };
    let extra = if nonzero.len() == 4 { ququart_branch_seeds(&mags, &m.targets45()) } else { vec![] };
    let (best, alternates) = solve_phases(m, &mags, &free, QUQUART_GRID, extra, gauge)?;
    continuum_warning(&mut warnings, &alternates);
    if nonzero.len() < 4 {
        warnings.push(format!("phase_unobservable:{} zero amplitudes", 4 - nonzero.len()));
        return Err(ReconstructError::PhaseUnobservable {
            partial: Box::new(result(best, alternates, warnings)),
        });
    }
    Ok(result(best, alternates, warnings))
}

fn clipped_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// Closed-form roots `(φ₁, φ₃)` of the qutrit equations with `φ₂ = 0`, used
/// as starting points. The first equation fixes `cos(φ₁ − φ₃)`; for each
/// sign of `φ₁ − φ₃` the second reads `R cos(φ₃ + β) = k`.
fn qutrit_branch_seeds(a: &[f64], t: &[f64]) -> Vec<Vec<f64>> {
    let delta0 = clipped_acos((a[0] * a[0] + a[2] * a[2] - 2.0 * t[1]) / (2.0 * a[0] * a[2]));
    let k = (t[0] - t[2]) / (SQRT_2 * a[1]);
    let mut seeds = Vec::new();
    for delta in [delta0, -delta0] {
        let (p, q) = (a[0] * delta.cos() + a[2], a[0] * delta.sin());
        let (r, beta) = (p.hypot(q), q.atan2(p));
        let gamma = if r > 0.0 { clipped_acos(k / r) } else { 0.0 };
        for phi3 in [gamma - beta, -gamma - beta] {
            seeds.push(vec![phi3 + delta, phi3]);
        }
    }
    seeds
}

/// Starting points for the ququart equations in phases `(θ₁, θ₂, θ₃)`
/// relative to `C₄`. For each `θ₁ = u` on a fine circle the third equation
/// fixes `cos(θ₂ − θ₃)` and then the first fixes `θ₃`, leaving four
/// branches along which only the second equation can fail; its local
/// minima along `u` are the seeds.
fn ququart_branch_seeds(a: &[f64], t: &[f64]) -> Vec<Vec<f64>> {
    const STEPS: usize = 720;
    let s = [t[0] + t[1] - 0.5, t[0] + t[2] - 0.5, t[0] + t[3] - 0.5];
    let point = |u: f64, sigma: f64, tau: f64| -> [f64; 3] {
        let gamma = clipped_acos((s[2] - a[0] * a[3] * u.cos()) / (a[1] * a[2]));
        let p = a[0] * a[2] * u.cos() + a[1] * a[3] * gamma.cos();
        let q = a[0] * a[2] * u.sin() - sigma * a[1] * a[3] * gamma.sin();
        let (r, beta) = (p.hypot(q), q.atan2(p));
        let theta3 = beta + tau * if r > 0.0 { clipped_acos(s[0] / r) } else { 0.0 };
        [u, theta3 + sigma * gamma, theta3]
    };
    let miss = |x: &[f64; 3]| -> f64 {
        let c: Vec<C64> = (0..4)
            .map(|i| C64::from_polar(a[i], if i < 3 { x[i] } else { 0.0 }))
            .collect();
        ququart_equations(&c, t).iter().map(|e| e * e).sum()
    };
    let mut seeds = Vec::new();
    for (sigma, tau) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let pts: Vec<[f64; 3]> = (0..STEPS)
            .map(|i| point(-std::f64::consts::PI + TAU * i as f64 / STEPS as f64, sigma, tau))
            .collect();
        let cost: Vec<f64> = pts.iter().map(&miss).collect();
        for i in 0..STEPS {
            let (prev, next) = (cost[(i + STEPS - 1) % STEPS], cost[(i + 1) % STEPS]);
            if cost[i] < prev && cost[i] <= next {
                seeds.push(pts[i].to_vec());
            }
        }
    }
    seeds
}

fn renormalize(mags: Vec<f64>) -> Vec<f64> {
    let norm = mags.iter().map(|a| a * a).sum::<f64>().sqrt();
    mags.into_iter().map(|a| a / norm).collect()
}

/// Dispatches on the estimate's kind.
pub fn reconstruct(m: &MagnitudeEstimate) -> Result<ReconstructionResult, ReconstructError> {
    match m.kind {
        StateKind::Qutrit => qutrit_phases(m),
        StateKind::Ququart => ququart_phases(m),
    }
}

/// `(K, C)` of a real qutrit from single-photon probabilities alone:
/// `K⁻¹ = ½(1 + Δw² + Δw₄₅²)`, `C = √(1 − Δw² − Δw₄₅²)` with
/// `Δw = w_H − w_V` in each basis.
pub fn qutrit_real_shortcut_from_singles(dw: f64, dw45: f64) -> (f64, f64) {
    let p2 = dw * dw + dw45 * dw45;
    (2.0 / (1.0 + p2), (1.0 - p2).max(0.0).sqrt())
}

/// [`qutrit_real_shortcut_from_singles`] with the singles of `m`.
pub fn qutrit_real_shortcut(m: &MagnitudeEstimate) -> (f64, f64) {
    qutrit_real_shortcut_from_singles(m.singles[0] - m.singles[1], m.singles45[0] - m.singles45[1])
}

/// `(K, C_I)` of a real ququart from magnitudes alone, via
/// `|C₁C₄ − C₂C₃|² = 2(|C₁|²|C₄|² + |C₂|²|C₃|²) − (|C₁(45°)|² + |C₄(45°)|² − ½)²`.
/// Values outside `[0, ¼]` are clipped and reported as inconsistent.
pub fn ququart_real_shortcut(m: &MagnitudeEstimate) -> Result<(f64, f64), ReconstructError> {
    let a: Vec<f64> = m.magnitudes.iter().map(|x| x * x).collect();
    let t = m.targets45();
    let cross = t[0] + t[3] - 0.5;
    let d2 = 2.0 * (a[0] * a[3] + a[1] * a[2]) - cross * cross;
    let clipped = d2.clamp(0.0, 0.25);
    let value = (ququart::schmidt_k_from_delta_sqr(clipped), (1.0 + 2.0 * clipped).sqrt());
    if (d2 - clipped).abs() > 1e-9 {
        return Err(ReconstructError::Inconsistent {
            detail: format!("|C1C4 - C2C3|^2 = {d2} lies outside [0, 1/4]"),
            clipped: Some(value),
        });
    }
    Ok(value)
}

/// Ideal two-basis estimate of a qutrit, skipping the record layer.
pub fn qutrit_estimate(q: &QutritState) -> MagnitudeEstimate {
    let r = q.rotate_basis(std::f64::consts::FRAC_PI_4);
    let singles = |s: &QutritState| {
        let [a, b, c] = s.magnitudes().map(|x| x * x);
        vec![a + b / 2.0, c + b / 2.0]
    };
    MagnitudeEstimate {
        kind: StateKind::Qutrit,
        magnitudes: q.magnitudes().to_vec(),
        magnitudes45: r.magnitudes().to_vec(),
        singles: singles(q),
        singles45: singles(&r),
        renormalization: [1.0, 1.0],
        noise_scale: 0.0,
    }
}

/// Ideal two-basis estimate of a ququart, skipping the record layer.
pub fn ququart_estimate(s: &QuquartState) -> MagnitudeEstimate {
    let r = s.rotate_basis_45();
    let singles = |s: &QuquartState| {
        let [a, b, c, d] = s.magnitudes().map(|x| x * x / 2.0);
        vec![a + b, a + c, c + d, b + d]
    };
    MagnitudeEstimate {
        kind: StateKind::Ququart,
        magnitudes: s.magnitudes().to_vec(),
        magnitudes45: r.magnitudes().to_vec(),
        singles: singles(s),
        singles45: singles(&r),
        renormalization: [1.0, 1.0],
        noise_scale: 0.0,
    }
}

/// Record keys in report order, for diagnostics.
pub fn required_keys(kind: StateKind) -> Vec<String> {
    amplitude_keys(kind).into_iter().flatten().collect()
}
