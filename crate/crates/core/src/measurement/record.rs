use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::state::StateKind;

pub const RECORD_SCHEMA: &str = "coincidence/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Natural,
    Rotated45,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Natural => "natural",
            Basis::Rotated45 => "rotated45",
        })
    }
}

impl FromStr for Basis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "natural" => Ok(Basis::Natural),
            "rotated45" => Ok(Basis::Rotated45),
            other => Err(format!("unknown basis `{other}` (expected natural or rotated45)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    Ideal,
    Sampled,
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseMode::Ideal => "ideal",
            NoiseMode::Sampled => "sampled",
        })
    }
}

impl FromStr for NoiseMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ideal" => Ok(NoiseMode::Ideal),
            "sampled" => Ok(NoiseMode::Sampled),
            other => Err(format!("unknown noise mode `{other}` (expected ideal or sampled)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("unsupported record schema {0:?}, expected \"{RECORD_SCHEMA}\"")]
    Schema(Option<String>),
    #[error("record field `{0}` is missing")]
    MissingField(&'static str),
    #[error("record field `{field}` is invalid: {reason}")]
    BadField { field: &'static str, reason: String },
}

/// Coincidence counts for one polarizer setting of the beam-splitter
/// experiment, keyed by ordered setting pairs `"σ|σ′"`: the first label is
/// the mode registered in channel I, the second the one in channel II.
///
/// Ideal records carry real-valued expectations; sampled records carry
/// integer counts and the seed that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceRecord {
    pub basis: Basis,
    pub mode: NoiseMode,
    pub eta: f64,
    pub total_pairs: u64,
    pub seed: Option<u64>,
    pub counts: BTreeMap<String, f64>,
}

/// Splits `"H|V"` into `("H", "V")`.
pub fn split_key(key: &str) -> Option<(&str, &str)> {
    key.split_once('|')
}

impl CoincidenceRecord {
    /// Total number of registered coincidences.
    pub fn coincidence_total(&self) -> f64 {
        self.counts.values().sum()
    }

    /// `w_{σ|σ′} = N_{σ|σ′} / Σ N`. Empty when nothing was registered.
    pub fn conditional_probabilities(&self) -> BTreeMap<String, f64> {
        let total = self.coincidence_total();
        if total <= 0.0 {
            return BTreeMap::new();
        }
        self.counts.iter().map(|(k, &n)| (k.clone(), n / total)).collect()
    }

    /// Unconditional single-photon probabilities `w_σ = Σ_{σ′} w_{σ|σ′}`.
    pub fn single_particle(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for (key, w) in self.conditional_probabilities() {
            if let Some((first, _)) = split_key(&key) {
                *out.entry(first.to_string()).or_insert(0.0) += w;
            }
        }
        out
    }

    /// Qutrit records use bare polarization labels (`H|V`), ququart records
    /// polarization-frequency labels (`Hh|Vl`).
    pub fn infer_kind(&self) -> Option<StateKind> {
        let mut kind = None;
        for key in self.counts.keys() {
            let (a, b) = split_key(key)?;
            let k = match (a.len(), b.len()) {
                (1, 1) => StateKind::Qutrit,
                (2, 2) => StateKind::Ququart,
                _ => return None,
            };
            if kind.is_some_and(|prev| prev != k) {
                return None;
            }
            kind = Some(k);
        }
        kind
    }

    pub fn to_json(&self) -> Value {
        let counts: Map<String, Value> = self
            .counts
            .iter()
            .map(|(k, &n)| {
                let v = match self.mode {
                    NoiseMode::Sampled => json!(n as u64),
                    NoiseMode::Ideal => json!(n),
                };
                (k.clone(), v)
            })
            .collect();
        let mut doc = json!({
            "schema": RECORD_SCHEMA,
            "basis": self.basis,
            "mode": self.mode,
            "eta": self.eta,
            "total_pairs": self.total_pairs,
            "counts": counts,
        });
        if let Some(seed) = self.seed {
            doc["seed"] = json!(seed);
        }
        doc
    }

    /// Parses a record document. Count values are accepted as any finite
    /// number; sign checks belong to the consumer.
    pub fn from_json(doc: &Value) -> Result<Self, RecordError> {
        let schema = doc.get("schema").and_then(Value::as_str);
        if schema != Some(RECORD_SCHEMA) {
            return Err(RecordError::Schema(schema.map(str::to_string)));
        }
        let field = |name: &'static str| doc.get(name).ok_or(RecordError::MissingField(name));
        let bad = |field: &'static str, reason: &str| RecordError::BadField { field, reason: reason.into() };

        let basis = field("basis")?
            .as_str()
            .ok_or_else(|| bad("basis", "not a string"))?
            .parse()
            .map_err(|e: String| bad("basis", &e))?;
        let mode = field("mode")?
            .as_str()
            .ok_or_else(|| bad("mode", "not a string"))?
            .parse()
            .map_err(|e: String| bad("mode", &e))?;
        let eta = field("eta")?.as_f64().ok_or_else(|| bad("eta", "not a number"))?;
        let total_pairs = field("total_pairs")?
            .as_u64()
            .ok_or_else(|| bad("total_pairs", "not a nonnegative integer"))?;
        let seed = match doc.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| bad("seed", "not a nonnegative integer"))?),
        };
        let mut counts = BTreeMap::new();
        for (key, v) in field("counts")?.as_object().ok_or_else(|| bad("counts", "not an object"))? {
            if split_key(key).is_none() {
                return Err(bad("counts", &format!("key `{key}` is not of the form `a|b`")));
            }
            let n = v.as_f64().filter(|n| n.is_finite());
            counts.insert(key.clone(), n.ok_or_else(|| bad("counts", &format!("`{key}` is not a number")))?);
        }
        Ok(Self { basis, mode, eta, total_pairs, seed, counts })
    }
}
