//! Max-min rate multicasting of a common stream to `K` receivers.

use crate::analytic::{rate_of, wit_capacity, ChannelSet, WitSolution};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::objectives::MinRateObjective;
use crate::optimizer::{maximize_from, OptimizerConfig, SolveReport};
use crate::rotation::{build_covariance, decompose_covariance, Covariance, LinearConstraintSystem, RotationParams};

/// A user's own capacity solution is accepted for everyone when every other
/// user achieves at least its rate less this slack.
pub const USER_OPTIMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MulticastProblem {
    pub channels: ChannelSet,
    pub config: OptimizerConfig,
}

impl MulticastProblem {
    pub fn new(channels: ChannelSet, config: OptimizerConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { channels, config })
    }
}

/// Which case produced the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubCase {
    /// User `k`'s (zero-based) capacity-achieving covariance is max-min optimal.
    UserOptimal(usize),
    /// At least two users' rates are active at the joint optimum.
    Joint,
}

impl std::fmt::Display for SubCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubCase::UserOptimal(k) => write!(f, "user-optimal({})", k + 1),
            SubCase::Joint => f.write_str("joint"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulticastSolution {
    pub covariance: Covariance,
    pub params: RotationParams,
    /// The common rate `min_k R_k`.
    pub rate: f64,
    pub per_user_rates: Vec<f64>,
    pub sub_case: SubCase,
    /// Optimizer report when the joint case was solved numerically.
    pub report: Option<SolveReport>,
}

/// `min_k log2 det(I + H_k Q H_k^H)`.
pub fn min_rate(q: &Covariance, channels: &ChannelSet) -> Result<f64> {
    let rates = per_user_rates(q, channels.channels())?;
    Ok(rates.into_iter().fold(f64::INFINITY, f64::min))
}

fn per_user_rates(q: &Covariance, channels: &[CMatrix]) -> Result<Vec<f64>> {
    channels.iter().map(|h| rate_of(q, h)).collect()
}

/// Solves the max-min problem.
///
/// Each user's capacity solution is checked first; if one of them already
/// serves every other user at least as well, it is optimal. Otherwise the
/// pointwise minimum is maximized, warm-started from the best of those
/// solutions and seeded with the rest.
pub fn multicast_solve(problem: &MulticastProblem) -> Result<MulticastSolution> {
    let channels = &problem.channels;
    let power = channels.power();
    let wits: Vec<WitSolution> = channels.channels().iter().map(|h| wit_capacity(h, power)).collect::<Result<_>>()?;

    let mut best_user: Option<(usize, f64, Vec<f64>)> = None;
    for (k, wit) in wits.iter().enumerate() {
        let rates = per_user_rates(&wit.covariance, channels.channels())?;
        let own = rates[k];
        let floor = rates.iter().copied().fold(f64::INFINITY, f64::min);
        if floor >= own - USER_OPTIMAL_TOL {
            let sol = MulticastSolution {
                params: decompose_covariance(&wit.covariance)?,
                covariance: wit.covariance.clone(),
                rate: floor,
                per_user_rates: rates,
                sub_case: SubCase::UserOptimal(k),
                report: None,
            };
            return Ok(sol);
        }
        if best_user.as_ref().is_none_or(|(_, f, _)| floor > *f) {
            best_user = Some((k, floor, rates));
        }
    }
    let (lead, _, _) = best_user.ok_or_else(|| Error::Dimension("no channels".into()))?;

    let start = decompose_covariance(&wits[lead].covariance)?;
    let extra: Vec<RotationParams> = wits
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != lead)
        .map(|(_, w)| decompose_covariance(&w.covariance))
        .collect::<Result<_>>()?;
    let linear = LinearConstraintSystem::new(channels.m(), power)?;
    let objective = MinRateObjective { channels: channels.channels() };
    let report = maximize_from(&objective, &linear, None, &start, &extra, &problem.config)?;
    let covariance = build_covariance(&report.best_params)?.tagged(power);
    let rates = per_user_rates(&covariance, channels.channels())?;
    Ok(MulticastSolution {
        rate: rates.iter().copied().fold(f64::INFINITY, f64::min),
        per_user_rates: rates,
        covariance,
        params: report.best_params.wrapped(),
        sub_case: SubCase::Joint,
        report: Some(report),
    })
}
