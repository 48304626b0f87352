//! The `crm` command-line front end.
//!
//! Each subcommand reads a channel file, solves one problem and writes a JSON
//! document (or an aligned text table) to stdout or `--output`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure |
//! | 2 | usage error |
//! | 3 | malformed channel file |
//! | 4 | dimension mismatch |
//! | 5 | solver did not converge (the document is still written) |
//! | 6 | invalid argument or channel value |

pub mod channel_file;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::{wit_capacity, ChannelSet};
use crate::error::Error;
use crate::eval::TrialCloud;
use crate::multicast::{multicast_solve, MulticastProblem};
use crate::optimizer::OptimizerConfig;
use crate::swipt::{energy_bounds, rate_energy_region, swipt_solve, SwiptProblem};
use channel_file::{ChannelFile, ChannelFileError};
use output::{
    matrix_entries, sig12, BaselineReport, BaselineRow, Diagnostics, MulticastReport, RegionReport, RegionRow,
    SwiptReport, Table, WitReport,
};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_DIMENSION: u8 = 4;
pub const EXIT_NOT_CONVERGED: u8 = 5;
pub const EXIT_INVALID: u8 = 6;

#[derive(Debug, Parser)]
#[command(name = "crm", version, about = "Transmit covariance design for MIMO SWIPT and max-min multicasting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity-achieving covariance for one channel.
    Wit {
        #[command(flatten)]
        common: Common,
        /// Channel to use, counted from 1.
        #[arg(long, default_value_t = 1)]
        channel: usize,
    },
    /// Maximum rate to the first channel with an energy floor at the second.
    Swipt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverFlags,
        /// Threshold fraction between E_min (0) and E_max (1).
        #[arg(long)]
        q: f64,
    },
    /// Rate-energy boundary sampled at evenly spaced thresholds.
    Region {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Max-min common rate over all channels in the file.
    Multicast {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Rates (and energies) of random covariances with full power.
    Baseline {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report min-rate over all channels instead of (rate, energy).
        #[arg(long)]
        multicast: bool,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Channel file (JSON).
    pub channel_file: PathBuf,
    /// Override the file's power budget.
    #[arg(long)]
    pub power: Option<f64>,
    /// Write the document here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    #[value(alias = "structured")]
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    /// Starting points per solve, including warm starts.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Iteration cap per inner ascent.
    #[arg(long = "max-iters")]
    pub max_iters: Option<usize>,
    /// Stopping tolerance on the objective change.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the random restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverFlags {
    pub fn config(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iterations: self.max_iters.unwrap_or(d.max_iterations),
            convergence_tol: self.tol.unwrap_or(d.convergence_tol),
            rng_seed: self.seed,
            ..d
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ChannelFileError> for CliError {
    fn from(e: ChannelFileError) -> Self {
        let code = match e {
            ChannelFileError::Io { .. } => EXIT_IO,
            ChannelFileError::Parse(_) => EXIT_PARSE,
            ChannelFileError::Dimension(_) => EXIT_DIMENSION,
            ChannelFileError::Invalid(_) => EXIT_INVALID,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dimension(_) => EXIT_DIMENSION,
            _ => EXIT_INVALID,
        };
        Self { code, message: e.to_string() }
    }
}

fn load(common: &Common) -> Result<ChannelSet, CliError> {
    if let Some(p) = common.power {
        if !(p.is_finite() && p > 0.0) {
            return Err(CliError { code: EXIT_INVALID, message: format!("--power must be positive, got {p}") });
        }
    }
    Ok(ChannelFile::load(&common.channel_file)?.channel_set(common.power)?)
}

fn emit<T: Serialize + Table>(doc: &T, common: &Common) -> Result<(), CliError> {
    let mut text = match common.format {
        Format::Json => serde_json::to_string_pretty(doc)
            .map_err(|e| CliError { code: EXIT_IO, message: format!("cannot serialize output: {e}") })?,
        Format::Table => doc.table(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_text(&text, common.output.as_deref())
}

fn write_text(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError { code: EXIT_IO, message: format!("cannot write output: {e}") };
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

/// Runs a parsed command. `Ok(false)` means the document was written but the
/// solver did not converge.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Wit { common, channel } => {
            let set = load(&common)?;
            if channel == 0 || channel > set.len() {
                return Err(CliError {
                    code: EXIT_INVALID,
                    message: format!("--channel must be between 1 and {}, got {channel}", set.len()),
                });
            }
            let sol = wit_capacity(set.channel(channel - 1), set.power())?;
            let doc = WitReport {
                command: "wit".into(),
                channel,
                power: sig12(set.power()),
                rate: sig12(sol.rate),
                active_modes: sol.active_modes,
                covariance: matrix_entries(sol.covariance.matrix()),
            };
            emit(&doc, &common)?;
            Ok(true)
        }
        Command::Swipt { common, solver, q } => {
            let set = load(&common)?;
            let (e_min, e_max) = energy_bounds(&set)?;
            let problem = SwiptProblem::new(set.clone(), q, solver.config())?;
            let point = swipt_solve(&problem)?;
            let doc = SwiptReport {
                command: "swipt".into(),
                power: sig12(set.power()),
                eta: sig12(set.eta()),
                q: sig12(q),
                threshold: sig12(point.threshold),
                e_min: sig12(e_min),
                e_max: sig12(e_max),
                rate: sig12(point.rate),
                energy: sig12(point.energy),
                covariance: matrix_entries(point.covariance.matrix()),
                diagnostics: Diagnostics::from(&point.diagnostics),
            };
            emit(&doc, &common)?;
            Ok(point.diagnostics.converged)
        }
        Command::Region { common, solver, points } => {
            let set = load(&common)?;
            let (e_min, e_max) = energy_bounds(&set)?;
            let region = rate_energy_region(&set, points, &solver.config())?;
            let doc = RegionReport {
                command: "region".into(),
                power: sig12(set.power()),
                eta: sig12(set.eta()),
                e_min: sig12(e_min),
                e_max: sig12(e_max),
                points: region.iter().map(RegionRow::from).collect(),
            };
            emit(&doc, &common)?;
            Ok(region.iter().all(|p| p.diagnostics.converged))
        }
        Command::Multicast { common, solver } => {
            let set = load(&common)?;
            if set.len() < 2 {
                return Err(CliError { code: EXIT_DIMENSION, message: "multicast needs at least two channels".into() });
            }
            let sol = multicast_solve(&MulticastProblem::new(set.clone(), solver.config())?)?;
            let converged = sol.report.as_ref().is_none_or(|r| r.converged);
            let doc = MulticastReport {
                command: "multicast".into(),
                power: sig12(set.power()),
                users: set.len(),
                rate: sig12(sol.rate),
                per_user_rates: sol.per_user_rates.iter().map(|&r| sig12(r)).collect(),
                sub_case: sol.sub_case.to_string(),
                covariance: matrix_entries(sol.covariance.matrix()),
                iterations: sol.report.as_ref().map_or(0, |r| r.iterations_used),
                restarts: sol.report.as_ref().map_or(0, |r| r.restarts_used),
                converged,
            };
            emit(&doc, &common)?;
            Ok(converged)
        }
        Command::Baseline { common, trials, seed, multicast } => {
            if trials == 0 {
                return Err(CliError { code: EXIT_INVALID, message: "--trials must be at least 1".into() });
            }
            let set = load(&common)?;
            let (cloud, mode) = if multicast {
                (TrialCloud::multicast(&set, trials, seed)?, "multicast")
            } else if set.len() == 1 {
                // A single receiver both decodes and harvests.
                let both = ChannelSet::new(vec![set.channel(0).clone(); 2], set.power(), set.eta())?;
                (TrialCloud::swipt(&both, trials, seed)?, "swipt")
            } else {
                (TrialCloud::swipt(&set, trials, seed)?, "swipt")
            };
            let doc = BaselineReport {
                command: "baseline".into(),
                mode: mode.into(),
                power: sig12(set.power()),
                seed,
                count: cloud.len(),
                samples: cloud
                    .points
                    .iter()
                    .map(|p| BaselineRow { rate: sig12(p.rate), energy: p.energy.map(sig12) })
                    .collect(),
            };
            emit(&doc, &common)?;
            Ok(true)
        }
    }
}

/// Parses `std::env::args`, runs the command and maps the outcome to an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("crm: solver did not converge; results may be inaccurate");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e) => {
            eprintln!("crm: {e}");
            ExitCode::from(e.code)
        }
    }
}
