//! JSON channel description.
//!
//! ```json
//! {
//!   "transmit_antennas": 4,
//!   "power": 10.0,
//!   "eta": 1.0,
//!   "channels": [
//!     { "name": "H1", "receive_antennas": 2, "entries": [[0.45, 1.75], ...] }
//!   ]
//! }
//! ```
//!
//! `entries` lists the `receive_antennas × transmit_antennas` complex gains
//! in row-major order, each as a `[real, imaginary]` pair. `eta` defaults to
//! 1 and `name` is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::{ChannelSet, DEFAULT_ETA};
use crate::linalg::{c, CMatrix};

/// Reasons a channel file cannot be turned into a [`ChannelSet`].
#[derive(Debug, thiserror::Error)]
pub enum ChannelFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed channel file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid channel file: {0}")]
    Invalid(String),
}

fn default_eta() -> f64 {
    DEFAULT_ETA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub transmit_antennas: usize,
    pub power: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub channels: Vec<ChannelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub receive_antennas: usize,
    pub entries: Vec<[f64; 2]>,
}

impl ChannelFile {
    pub fn parse(text: &str) -> Result<Self, ChannelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ChannelFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ChannelFileError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Channel matrices after dimension checks.
    pub fn matrices(&self) -> Result<Vec<CMatrix>, ChannelFileError> {
        let m = self.transmit_antennas;
        if m == 0 {
            return Err(ChannelFileError::Dimension("transmit_antennas must be positive".into()));
        }
        if self.channels.is_empty() {
            return Err(ChannelFileError::Dimension("at least one channel is required".into()));
        }
        self.channels
            .iter()
            .enumerate()
            .map(|(k, ch)| {
                let label = ch.name.clone().unwrap_or_else(|| format!("channel {}", k + 1));
                let n = ch.receive_antennas;
                if n == 0 {
                    return Err(ChannelFileError::Dimension(format!("{label}: receive_antennas must be positive")));
                }
                if ch.entries.len() != n * m {
                    return Err(ChannelFileError::Dimension(format!(
                        "{label}: expected {n}x{m} = {} entries, found {}",
                        n * m,
                        ch.entries.len()
                    )));
                }
                if ch.entries.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(ChannelFileError::Invalid(format!("{label}: entries must be finite")));
                }
                let values: Vec<_> = ch.entries.iter().map(|[re, im]| c(*re, *im)).collect();
                Ok(CMatrix::from_row_slice(n, m, &values))
            })
            .collect()
    }

    /// The channel set, optionally with the file's power budget replaced.
    pub fn channel_set(&self, power: Option<f64>) -> Result<ChannelSet, ChannelFileError> {
        let matrices = self.matrices()?;
        ChannelSet::new(matrices, power.unwrap_or(self.power), self.eta)
            .map_err(|e| ChannelFileError::Invalid(e.to_string()))
    }

    /// Builds a file document from matrices, mostly for tests and tooling.
    pub fn from_matrices(matrices: &[CMatrix], power: f64, eta: f64) -> Self {
        let m = matrices.first().map_or(0, |h| h.ncols());
        let channels = matrices
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let mut entries = Vec::with_capacity(h.len());
                for r in 0..h.nrows() {
                    for col in 0..h.ncols() {
                        entries.push([h[(r, col)].re, h[(r, col)].im]);
                    }
                }
                ChannelEntry { name: Some(format!("H{}", k + 1)), receive_antennas: h.nrows(), entries }
            })
            .collect();
        Self { transmit_antennas: m, power, eta, channels }
    }
}
