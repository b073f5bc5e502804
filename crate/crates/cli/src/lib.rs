//! Command implementations behind the `biphoton` binary. Each command turns
//! parsed arguments into JSON values or CSV text; `main` only does I/O and
//! exit codes.

use std::f64::consts::PI;
use std::fmt::Write as _;

use biphoton::json::{complex_from_value, complex_list, to_canonical_string};
use biphoton::measurement::{self, Basis, CoincidenceRecord, ExperimentConfig, NoiseMode};
use biphoton::ququart::{self, QuquartState};
use biphoton::reconstruct::{self, MagnitudeEstimate, ReconstructError};
use biphoton::{ComplexMatrix, QutritState, SchmidtDecomposition, StateKind, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Contract(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Contract(_) => 4,
        }
    }
}

fn input(msg: impl ToString) -> CliError {
    CliError::Input(msg.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "biphoton", version, about = "Entanglement and two-basis tomography of biphoton qutrits and ququarts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entanglement quantifiers, polarization and Schmidt modes of a state.
    Quantify {
        #[command(flatten)]
        state: StateArgs,
        /// Include the full two-photon density matrix (16×16 for ququarts).
        #[arg(long)]
        density: bool,
    },
    /// CSV of (parameter, K, C or C_I, S_r) along one of the standard curves.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        /// Number of evenly spaced grid points.
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Explicit parameter values, overriding the grid.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        param: Vec<f64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Coincidence record of the beam-splitter experiment, one JSON line.
    /// Records arriving on a non-terminal stdin are passed through first.
    Simulate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "natural")]
        basis: Basis,
        /// Detector efficiency η.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Number of biphoton pairs.
        #[arg(long, default_value_t = 1_000_000)]
        pairs: u64,
        #[arg(long, env = "BIPHOTON_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "ideal")]
        noise: NoiseMode,
        /// Ignore stdin even when it is not a terminal.
        #[arg(long)]
        no_stdin: bool,
    },
    /// Recover a state from one natural and one rotated45 record.
    Reconstruct {
        /// Record files (JSON, one or more documents each); stdin when absent
        /// or `-`.
        files: Vec<String>,
    },
    /// Two-qudit quantifiers of a ququart next to the two-qubit model's.
    #[command(name = "compare-2qubit")]
    Compare2Qubit {
        #[command(flatten)]
        state: StateArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct StateArgs {
    /// qutrit or ququart; inferred from the amplitude count when omitted.
    #[arg(long)]
    pub kind: Option<StateKind>,
    /// Comma-separated amplitudes, e.g. `0.6,0,0.8` or `1,0.5+0.5i,-1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub amplitudes: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Family parameters in radians.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub param: Vec<f64>,
    /// State spec JSON file, or `-` for stdin.
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    NonEntangled,
    MaxEntangled,
    PsiPhi,
    PsiPhiPrime,
}

impl Family {
    fn parse_name(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, false).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    Fig1,
    Fig4,
    Fig5,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum State {
    Qutrit(QutritState),
    Ququart(QuquartState),
}

impl State {
    pub fn kind(&self) -> StateKind {
        match self {
            State::Qutrit(_) => StateKind::Qutrit,
            State::Ququart(_) => StateKind::Ququart,
        }
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        match self {
            State::Qutrit(q) => q.amplitudes().to_vec(),
            State::Ququart(s) => s.amplitudes().to_vec(),
        }
    }
}

fn state_from_amplitudes(kind: Option<StateKind>, amps: &[C64]) -> Result<State, CliError> {
    let kind = match (kind, amps.len()) {
        (Some(k), n) if n != k.amplitude_count() => {
            return Err(input(format!("{k} needs {} amplitudes, got {n}", k.amplitude_count())))
        }
        (Some(k), _) => k,
        (None, 3) => StateKind::Qutrit,
        (None, 4) => StateKind::Ququart,
        (None, n) => return Err(input(format!("expected 3 or 4 amplitudes, got {n}"))),
    };
    Ok(match kind {
        StateKind::Qutrit => State::Qutrit(QutritState::from_slice(amps).map_err(input)?),
        StateKind::Ququart => State::Ququart(QuquartState::from_slice(amps).map_err(input)?),
    })
}

fn state_from_family(kind: Option<StateKind>, family: Family, p: &[f64]) -> Result<State, CliError> {
    let needed = match family {
        Family::NonEntangled | Family::MaxEntangled => 3,
        Family::PsiPhi | Family::PsiPhiPrime => 1,
    };
    if p.len() != needed {
        return Err(input(format!("family {family:?} takes {needed} parameter(s), got {}", p.len())));
    }
    let state = match family {
        Family::NonEntangled => State::Qutrit(QutritState::non_entangled_family(p[0], p[1], p[2])),
        Family::MaxEntangled => State::Qutrit(QutritState::max_entangled_family(p[0], p[1], p[2])),
        Family::PsiPhi => State::Ququart(ququart::family_psi_phi(p[0]).0),
        Family::PsiPhiPrime => State::Ququart(ququart::family_psi_phi_prime(p[0])),
    };
    if kind.is_some_and(|k| k != state.kind()) {
        return Err(input(format!("family {family:?} is a {}", state.kind())));
    }
    Ok(state)
}

/// Parses a comma-separated amplitude list; entries use `num-complex`
/// syntax (`1`, `-0.5i`, `0.3+0.4i`).
pub fn parse_amplitudes(text: &str) -> Result<Vec<C64>, CliError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<C64>().map_err(|_| input(format!("cannot parse amplitude `{tok}`")))
        })
        .collect()
}

/// A state spec document: `{kind?, amplitudes}` or `{kind?, family, params}`.
/// Unknown fields are ignored so reconstruction output can be fed back.
pub fn state_from_spec(doc: &Value) -> Result<State, CliError> {
    let obj = doc.as_object().ok_or_else(|| input("state spec must be a JSON object"))?;
    let kind = match obj.get("kind") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_str()
                .ok_or_else(|| input("`kind` must be a string"))?
                .parse::<StateKind>()
                .map_err(input)?,
        ),
    };
    match (obj.get("amplitudes"), obj.get("family")) {
        (Some(a), None) => {
            let list = a.as_array().ok_or_else(|| input("`amplitudes` must be an array"))?;
            let amps = list
                .iter()
                .map(|v| complex_from_value(v).ok_or_else(|| input(format!("bad amplitude {v}"))))
                .collect::<Result<Vec<_>, _>>()?;
            state_from_amplitudes(kind, &amps)
        }
        (None, Some(f)) => {
            let name = f.as_str().ok_or_else(|| input("`family` must be a string"))?;
            let family = Family::parse_name(name).ok_or_else(|| input(format!("unknown family `{name}`")))?;
            let params = match obj.get("params") {
                None => vec![],
                Some(p) => p
                    .as_array()
                    .ok_or_else(|| input("`params` must be an array"))?
                    .iter()
                    .map(|v| v.as_f64().ok_or_else(|| input(format!("bad parameter {v}"))))
                    .collect::<Result<_, _>>()?,
            };
            state_from_family(kind, family, &params)
        }
        (Some(_), Some(_)) => Err(input("state spec has both `amplitudes` and `family`")),
        (None, None) => Err(input("state spec needs `amplitudes` or `family`")),
    }
}

/// Resolves state flags; `read` supplies the contents of `--spec`.
pub fn resolve_state(
    args: &StateArgs,
    read: impl FnOnce(&str) -> Result<String, CliError>,
) -> Result<State, CliError> {
    let sources = [args.amplitudes.is_some(), args.family.is_some(), args.spec.is_some()];
    match sources.iter().filter(|&&b| b).count() {
        0 => return Err(input("give one of --amplitudes, --family or --spec")),
        1 => {}
        _ => return Err(input("--amplitudes, --family and --spec are mutually exclusive")),
    }
    if let Some(text) = &args.amplitudes {
        return state_from_amplitudes(args.kind, &parse_amplitudes(text)?);
    }
    if let Some(family) = args.family {
        return state_from_family(args.kind, family, &args.param);
    }
    let path = args.spec.as_deref().expect("one source present");
    let doc: Value = serde_json::from_str(&read(path)?).map_err(|e| input(format!("spec: {e}")))?;
    let state = state_from_spec(&doc)?;
    if args.kind.is_some_and(|k| k != state.kind()) {
        return Err(input(format!("--kind disagrees with spec kind {}", state.kind())));
    }
    Ok(state)
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| complex_list(&(0..m.cols()).map(|j| m[(i, j)]).collect::<Vec<_>>()))
            .collect(),
    )
}

fn schmidt_json(dec: &SchmidtDecomposition) -> Value {
    json!({
        "terms": dec.terms.iter().map(|t| json!({
            "lambda": t.lambda,
            "mode": complex_list(t.mode.as_slice()),
        })).collect::<Vec<_>>(),
        "count": dec.len(),
    })
}

pub fn quantify_json(state: &State, density: bool) -> Value {
    let mut doc = match state {
        State::Qutrit(q) => {
            let r = q.quantify();
            let p = q.polarization();
            json!({
                "kind": "qutrit",
                "amplitudes": complex_list(&q.amplitudes()),
                "schmidt_k": r.schmidt_k,
                "concurrence": r.concurrence,
                "entropy": r.entropy,
                "lambdas": [r.lambda_plus, r.lambda_minus],
                "polarization": { "xi": p.xi, "stokes": p.stokes(), "degree_p": p.degree_p },
                "schmidt": schmidt_json(&q.schmidt_decompose()),
            })
        }
        State::Ququart(s) => {
            let r = s.quantify();
            json!({
                "kind": "ququart",
                "amplitudes": complex_list(&s.amplitudes()),
                "schmidt_k": r.schmidt_k,
                "i_concurrence": r.i_concurrence,
                "entropy": r.entropy,
                "lambdas": r.lambdas,
                "schmidt": schmidt_json(&s.schmidt_decompose()),
            })
        }
    };
    if density {
        let rho = match state {
            State::Qutrit(q) => q.density_matrix(),
            State::Ququart(s) => s.density_matrix(),
        };
        doc["density_matrix"] = matrix_json(&rho);
    }
    doc
}

pub fn compare_json(s: &QuquartState) -> Value {
    let r = s.quantify();
    let m = s.two_qubit_model();
    json!({
        "amplitudes": complex_list(&s.amplitudes()),
        "two_qudit": { "d": 4, "schmidt_k": r.schmidt_k, "i_concurrence": r.i_concurrence },
        "two_qubit_model": {
            "d": 2,
            "k_2qb": m.k_2qb,
            "c_2qb": m.c_2qb,
            "rho_r_2qb": matrix_json(&m.rho_r_2qb),
        },
        "k_ratio": r.schmidt_k / m.k_2qb,
    })
}

/// The default parameter grid of a sweep: `C₊ ∈ [−1, 1]` or `φ ∈ [0, π]`.
pub fn sweep_grid(family: SweepFamily, points: usize) -> Vec<f64> {
    let (lo, hi) = match family {
        SweepFamily::Fig1 => (-1.0, 1.0),
        SweepFamily::Fig4 | SweepFamily::Fig5 => (0.0, PI),
    };
    match points {
        0 => vec![],
        1 => vec![lo],
        n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// One `(parameter, K, C or C_I, S_r)` row, computed by the full quantifiers.
pub fn sweep_row(family: SweepFamily, x: f64) -> Result<[f64; 4], CliError> {
    Ok(match family {
        SweepFamily::Fig1 => {
            if !(-1.0..=1.0).contains(&x) {
                return Err(input(format!("C+ = {x} lies outside [-1, 1]")));
            }
            let r = QutritState::real_from_c_plus(x).map_err(input)?.quantify();
            [x, r.schmidt_k, r.concurrence, r.entropy]
        }
        SweepFamily::Fig4 => {
            let r = ququart::family_psi_phi(x).0.quantify();
            [x, r.schmidt_k, r.i_concurrence, r.entropy]
        }
        SweepFamily::Fig5 => {
            let r = ququart::family_psi_phi_prime(x).quantify();
            [x, r.schmidt_k, r.i_concurrence, r.entropy]
        }
    })
}

pub fn sweep_csv(family: SweepFamily, params: &[f64]) -> Result<String, CliError> {
    let mut out = String::from(match family {
        SweepFamily::Fig1 => "c_plus,K,C,S_r\n",
        SweepFamily::Fig4 | SweepFamily::Fig5 => "phi,K,C_I,S_r\n",
    });
    for &x in params {
        let [a, b, c, d] = sweep_row(family, x)?;
        writeln!(out, "{a},{b},{c},{d}").expect("writing to a String");
    }
    Ok(out)
}

pub fn simulate(state: &State, cfg: &ExperimentConfig) -> CoincidenceRecord {
    match state {
        State::Qutrit(q) => measurement::simulate_qutrit(q, cfg),
        State::Ququart(s) => measurement::simulate_ququart(s, cfg),
    }
}

/// Splits a text into whitespace-separated JSON documents.
pub fn parse_documents(text: &str) -> Result<Vec<Value>, CliError> {
    serde_json::Deserializer::from_str(text)
        .into_iter::<Value>()
        .collect::<Result<_, _>>()
        .map_err(|e| input(format!("invalid JSON: {e}")))
}

/// Reconstruction from exactly two record documents. A partial result for
/// unobservable phases is still printed; its warnings say so.
pub fn reconstruct_json(docs: &[Value]) -> Result<Value, CliError> {
    if docs.len() != 2 {
        return Err(CliError::Contract(format!(
            "reconstruct needs one natural and one rotated45 record, got {} document(s)",
            docs.len()
        )));
    }
    let records = docs
        .iter()
        .map(|d| CoincidenceRecord::from_json(d).map_err(input))
        .collect::<Result<Vec<_>, _>>()?;
    let m = MagnitudeEstimate::from_records(&records[0], &records[1]).map_err(recon_error)?;
    match reconstruct::reconstruct(&m) {
        Ok(r) => Ok(r.to_json()),
        Err(ReconstructError::PhaseUnobservable { partial }) => Ok(partial.to_json()),
        Err(e) => Err(recon_error(e)),
    }
}

fn recon_error(e: ReconstructError) -> CliError {
    match e {
        ReconstructError::BasisMismatch(_) | ReconstructError::KindMismatch(_) => {
            CliError::Contract(e.to_string())
        }
        _ => input(e),
    }
}

pub fn canonical_line(v: &Value) -> String {
    let mut s = to_canonical_string(v);
    s.push('\n');
    s
}
