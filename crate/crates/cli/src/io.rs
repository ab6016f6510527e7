//! Ensemble files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "states": [[[1, 0], [0, 0]], [[0.6, 0], [0, 0.8]]],
//!   "probs": [0.5, 0.5]
//! }
//! ```
//!
//! Each state is a list of `dimension` amplitudes written as `[re, im]`.

use std::fmt;
use std::path::Path;

use ensemble_vol_core::ensemble::{Ensemble, PureState};
use ensemble_vol_core::linalg::C64;
use serde::{Deserialize, Serialize};

/// Norm deviation tolerated in input files without `--renormalize`.
pub const INPUT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dimension: usize,
    pub states: Vec<Vec<[f64; 2]>>,
    pub probs: Vec<f64>,
}

#[derive(Debug)]
pub enum InputError {
    Io(std::io::Error),
    /// Malformed document; carries serde's line and column.
    Parse(serde_json::Error),
    Field { field: String, message: String },
    Invalid(ensemble_vol_core::Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(e) => write!(f, "cannot read input: {e}"),
            InputError::Parse(e) => write!(f, "malformed ensemble file: {e}"),
            InputError::Field { field, message } => write!(f, "field `{field}`: {message}"),
            InputError::Invalid(e) => write!(f, "invalid ensemble: {e}"),
        }
    }
}

impl std::error::Error for InputError {}

fn field(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl EnsembleFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(InputError::Parse)
    }

    pub fn from_ensemble(e: &Ensemble) -> Self {
        EnsembleFile {
            dimension: e.dimension(),
            states: e
                .states()
                .iter()
                .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                .collect(),
            probs: e.probs().to_vec(),
        }
    }

    /// Validates against the schema; with `renormalize` the states and the
    /// probability vector are rescaled to unit norm and unit sum first.
    pub fn to_ensemble(&self, renormalize: bool) -> Result<Ensemble, InputError> {
        if self.dimension == 0 {
            return Err(field("dimension", "must be at least 1"));
        }
        if self.states.is_empty() {
            return Err(field("states", "at least one state required"));
        }
        if self.probs.len() != self.states.len() {
            return Err(field(
                "probs",
                format!("{} entries for {} states", self.probs.len(), self.states.len()),
            ));
        }
        let mut states = Vec::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if s.len() != self.dimension {
                return Err(field(
                    format!("states[{i}]"),
                    format!("{} amplitudes, dimension is {}", s.len(), self.dimension),
                ));
            }
            let amps: Vec<C64> = s.iter().map(|&[re, im]| C64::new(re, im)).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(field(format!("states[{i}]"), "zero or non-finite vector"));
            }
            if !renormalize && (norm - 1.0).abs() > INPUT_NORM_TOL {
                return Err(field(
                    format!("states[{i}]"),
                    format!("norm {norm} is not 1 (use --renormalize)"),
                ));
            }
            // Unit vectors pass through bit for bit so emitted ensembles re-load exactly.
            let state = if (norm - 1.0).abs() <= ensemble_vol_core::ensemble::NORM_TOL {
                PureState::new(amps)
            } else {
                PureState::normalized(amps)
            };
            states.push(state.map_err(InputError::Invalid)?);
        }
        let mut probs = self.probs.clone();
        if renormalize {
            let total: f64 = probs.iter().sum();
            if total > 0.0 && total.is_finite() {
                probs.iter_mut().for_each(|p| *p /= total);
            }
        }
        Ensemble::new(states, probs).map_err(InputError::Invalid)
    }
}

pub fn load_ensemble(path: &Path, renormalize: bool) -> Result<Ensemble, InputError> {
    let text = std::fs::read_to_string(path).map_err(InputError::Io)?;
    EnsembleFile::parse(&text)?.to_ensemble(renormalize)
}
