//! Output documents and their table rendering.
//!
//! Every floating-point value is rounded to 12 significant digits before it
//! is serialized, so documents are stable across runs and platforms.

use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::swipt::{PointDiagnostics, RateEnergyPoint};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Row-major `[re, im]` entries.
pub fn matrix_entries(q: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..q.nrows())
        .map(|r| (0..q.ncols()).map(|c| [sig12(q[(r, c)].re), sig12(q[(r, c)].im)]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: String,
    pub threshold_clamped: bool,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    pub max_violation: f64,
}

impl From<&PointDiagnostics> for Diagnostics {
    fn from(d: &PointDiagnostics) -> Self {
        Self {
            method: d.method.as_str().to_string(),
            threshold_clamped: d.threshold_clamped,
            iterations: d.iterations,
            restarts: d.restarts,
            converged: d.converged,
            max_violation: sig12(d.max_violation),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitReport {
    pub command: String,
    pub channel: usize,
    pub power: f64,
    pub rate: f64,
    pub active_modes: usize,
    pub covariance: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwiptReport {
    pub command: String,
    pub power: f64,
    pub eta: f64,
    pub q: f64,
    pub threshold: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub rate: f64,
    pub energy: f64,
    pub covariance: Vec<Vec<[f64; 2]>>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub q: f64,
    pub threshold: f64,
    pub rate: f64,
    pub energy: f64,
    pub method: String,
    pub converged: bool,
}

impl From<&RateEnergyPoint> for RegionRow {
    fn from(p: &RateEnergyPoint) -> Self {
        Self {
            q: sig12(p.q),
            threshold: sig12(p.threshold),
            rate: sig12(p.rate),
            energy: sig12(p.energy),
            method: p.diagnostics.method.as_str().to_string(),
            converged: p.diagnostics.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub command: String,
    pub power: f64,
    pub eta: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub points: Vec<RegionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticastReport {
    pub command: String,
    pub power: f64,
    pub users: usize,
    pub rate: f64,
    pub per_user_rates: Vec<f64>,
    pub sub_case: String,
    pub covariance: Vec<Vec<[f64; 2]>>,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub command: String,
    pub mode: String,
    pub power: f64,
    pub seed: u64,
    pub count: usize,
    pub samples: Vec<BaselineRow>,
}

fn fmt(x: f64) -> String {
    format!("{:.12}", x).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn rows_to_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn matrix_table(q: &[Vec<[f64; 2]>]) -> String {
    let rows: Vec<Vec<String>> = q
        .iter()
        .map(|row| row.iter().map(|[re, im]| format!("{}{:+}i", fmt(*re), sig12(*im))).collect())
        .collect();
    let header: Vec<String> = (1..=rows.first().map_or(0, Vec::len)).map(|j| format!("col{j}")).collect();
    rows_to_table(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)
}

pub trait Table {
    fn table(&self) -> String;
}

impl Table for WitReport {
    fn table(&self) -> String {
        let mut s = key_values(&[
            ("channel", self.channel.to_string()),
            ("power", fmt(self.power)),
            ("rate", fmt(self.rate)),
            ("active_modes", self.active_modes.to_string()),
        ]);
        s.push_str(&matrix_table(&self.covariance));
        s
    }
}

impl Table for SwiptReport {
    fn table(&self) -> String {
        let mut s = key_values(&[
            ("power", fmt(self.power)),
            ("q", fmt(self.q)),
            ("threshold", fmt(self.threshold)),
            ("e_min", fmt(self.e_min)),
            ("e_max", fmt(self.e_max)),
            ("rate", fmt(self.rate)),
            ("energy", fmt(self.energy)),
            ("method", self.diagnostics.method.clone()),
            ("converged", self.diagnostics.converged.to_string()),
            ("iterations", self.diagnostics.iterations.to_string()),
        ]);
        s.push_str(&matrix_table(&self.covariance));
        s
    }
}

impl Table for RegionReport {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .points
            .iter()
            .map(|p| vec![fmt(p.q), fmt(p.threshold), fmt(p.rate), fmt(p.energy), p.method.clone()])
            .collect();
        rows_to_table(&["q", "threshold", "rate", "energy", "method"], &rows)
    }
}

impl Table for MulticastReport {
    fn table(&self) -> String {
        let mut pairs = vec![
            ("power", fmt(self.power)),
            ("users", self.users.to_string()),
            ("rate", fmt(self.rate)),
            ("sub_case", self.sub_case.clone()),
            ("converged", self.converged.to_string()),
        ];
        let per_user: Vec<String> = self.per_user_rates.iter().map(|r| fmt(*r)).collect();
        pairs.push(("per_user_rates", per_user.join(" ")));
        let mut s = key_values(&pairs);
        s.push_str(&matrix_table(&self.covariance));
        s
    }
}

impl Table for BaselineReport {
    fn table(&self) -> String {
        let with_energy = self.samples.iter().any(|r| r.energy.is_some());
        let rows: Vec<Vec<String>> = self
            .samples
            .iter()
            .map(|r| {
                let mut row = vec![fmt(r.rate)];
                if with_energy {
                    row.push(r.energy.map(fmt).unwrap_or_default());
                }
                row
            })
            .collect();
        if with_energy {
            rows_to_table(&["rate", "energy"], &rows)
        } else {
            rows_to_table(&["rate"], &rows)
        }
    }
}
