//! Rate-energy trade-off between an information receiver (`H1`) and an
//! energy-harvesting receiver (`H2`).
//!
//! For a threshold fraction `q` the harvested-energy floor is
//! `Ē = E_min + q (E_max - E_min)`, where `E_min` is the energy delivered by
//! the capacity-achieving covariance for `H1` and `E_max` the best energy
//! any feasible covariance can deliver to `H2`.

use crate::analytic::{eh_max, energy_of, rate_of, wit_capacity, ChannelSet};
use crate::error::{Error, Result};
use crate::objectives::{EnergyConstraint, RateObjective};
use crate::optimizer::{maximize_from, OptimizerConfig, SolveReport};
use crate::rotation::{build_covariance, decompose_covariance, Covariance, LinearConstraintSystem, RotationParams};

/// Rate slack tolerated between neighbouring points of a region.
pub const MONOTONE_RATE_TOL: f64 = 1e-3;
/// Energy slack tolerated between neighbouring points of a region.
pub const MONOTONE_ENERGY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SwiptProblem {
    pub channels: ChannelSet,
    pub q: f64,
    pub config: OptimizerConfig,
}

impl SwiptProblem {
    /// Requires exactly two channels: information receiver first.
    pub fn new(channels: ChannelSet, q: f64, config: OptimizerConfig) -> Result<Self> {
        if channels.len() != 2 {
            return Err(Error::Dimension(format!(
                "SWIPT needs exactly two channels (information, energy), got {}",
                channels.len()
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!("threshold fraction q must lie in [0, 1], got {q}")));
        }
        config.validate()?;
        Ok(Self { channels, q, config })
    }
}

/// How a boundary point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointMethod {
    /// Closed-form capacity solution for `H1`.
    Wit,
    /// Closed-form energy beamformer for `H2`.
    EnergyHarvesting,
    /// Constrained rotation-parameter ascent.
    Optimized,
}

impl PointMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointMethod::Wit => "wit",
            PointMethod::EnergyHarvesting => "energy-harvesting",
            PointMethod::Optimized => "optimized",
        }
    }
}

/// Solver bookkeeping attached to each point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDiagnostics {
    pub method: PointMethod,
    /// Set when the requested threshold exceeded `E_max` and was clamped.
    pub threshold_clamped: bool,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    /// Largest constraint violation at the returned point (zero when slack).
    pub max_violation: f64,
}

impl PointDiagnostics {
    fn closed_form(method: PointMethod, threshold_clamped: bool) -> Self {
        Self { method, threshold_clamped, iterations: 0, restarts: 0, converged: true, max_violation: 0.0 }
    }

    fn from_report(report: &SolveReport, threshold_clamped: bool) -> Self {
        Self {
            method: PointMethod::Optimized,
            threshold_clamped,
            iterations: report.iterations_used,
            restarts: report.restarts_used,
            converged: report.converged,
            max_violation: report.max_violation(),
        }
    }
}

/// One point of the rate-energy boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEnergyPoint {
    pub q: f64,
    /// Energy floor `Ē(q)` actually imposed.
    pub threshold: f64,
    pub rate: f64,
    pub energy: f64,
    pub covariance: Covariance,
    pub params: RotationParams,
    pub diagnostics: PointDiagnostics,
}

/// `(E_min, E_max)` for the first two channels of `channels`.
pub fn energy_bounds(channels: &ChannelSet) -> Result<(f64, f64)> {
    let ctx = Context::new(channels)?;
    Ok((ctx.e_min, ctx.e_max))
}

/// Closed-form endpoints shared by every threshold.
struct Context<'a> {
    channels: &'a ChannelSet,
    wit: Covariance,
    wit_rate: f64,
    e_min: f64,
    eh: Covariance,
    e_max: f64,
}

impl<'a> Context<'a> {
    fn new(channels: &'a ChannelSet) -> Result<Self> {
        if channels.len() < 2 {
            return Err(Error::Dimension("SWIPT needs an information and an energy channel".into()));
        }
        let (h1, h2) = (channels.channel(0), channels.channel(1));
        let power = channels.power();
        let wit = wit_capacity(h1, power)?;
        let e_min = energy_of(&wit.covariance, h2, channels.eta())?;
        let (eh, e_max) = eh_max(h2, power, channels.eta())?;
        // Both come from closed forms; E_min can only exceed E_max by rounding.
        let e_min = e_min.min(e_max);
        Ok(Self { channels, wit: wit.covariance, wit_rate: wit.rate, e_min, eh, e_max })
    }

    fn threshold(&self, q: f64) -> (f64, bool) {
        let raw = self.e_min + q * (self.e_max - self.e_min);
        if raw > self.e_max {
            (self.e_max, true)
        } else {
            (raw, false)
        }
    }

    fn wit_point(&self, q: f64) -> Result<RateEnergyPoint> {
        let (threshold, clamped) = self.threshold(q);
        Ok(RateEnergyPoint {
            q,
            threshold,
            rate: self.wit_rate,
            energy: self.e_min,
            covariance: self.wit.clone(),
            params: decompose_covariance(&self.wit)?,
            diagnostics: PointDiagnostics::closed_form(PointMethod::Wit, clamped),
        })
    }

    fn eh_point(&self, q: f64) -> Result<RateEnergyPoint> {
        let (threshold, clamped) = self.threshold(q);
        Ok(RateEnergyPoint {
            q,
            threshold,
            rate: rate_of(&self.eh, self.channels.channel(0))?,
            energy: self.e_max,
            covariance: self.eh.clone(),
            params: decompose_covariance(&self.eh)?,
            diagnostics: PointDiagnostics::closed_form(PointMethod::EnergyHarvesting, clamped),
        })
    }

    /// Solves one threshold. `start` must meet the energy floor; `warm` are
    /// additional starting points that need not.
    fn optimize(
        &self,
        q: f64,
        start: Option<&RotationParams>,
        warm: &[RotationParams],
        config: &OptimizerConfig,
    ) -> Result<RateEnergyPoint> {
        let (threshold, clamped) = self.threshold(q);
        if q == 0.0 || self.e_min >= threshold {
            return self.wit_point(q);
        }
        if q == 1.0 || clamped {
            return self.eh_point(q);
        }
        let (h1, h2) = (self.channels.channel(0), self.channels.channel(1));
        let eta = self.channels.eta();
        let power = self.channels.power();
        let linear = LinearConstraintSystem::new(self.channels.m(), power)?;
        let objective = RateObjective::new(h1);
        let constraint = EnergyConstraint { channel: h2, eta, threshold };

        let eh_params = decompose_covariance(&self.eh)?;
        let mut extra = Vec::with_capacity(warm.len() + 2);
        let primary = match start {
            Some(p) => {
                extra.push(eh_params);
                p.clone()
            }
            None => eh_params,
        };
        extra.extend(warm.iter().cloned());
        extra.push(decompose_covariance(&self.wit)?);

        let report = maximize_from(&objective, &linear, Some(&constraint), &primary, &extra, config)?;
        let covariance = build_covariance(&report.best_params)?.tagged(power);
        Ok(RateEnergyPoint {
            q,
            threshold,
            rate: rate_of(&covariance, h1)?,
            energy: energy_of(&covariance, h2, eta)?,
            covariance,
            params: report.best_params.wrapped(),
            diagnostics: PointDiagnostics::from_report(&report, clamped),
        })
    }
}

/// Maximum rate to `H1` subject to the energy floor `Ē(q)` at `H2`.
///
/// `q = 0` returns the capacity solution and `q = 1` the energy beamformer
/// directly; otherwise the solver is warm-started from the beamformer, which
/// satisfies every floor.
pub fn swipt_solve(problem: &SwiptProblem) -> Result<RateEnergyPoint> {
    let ctx = Context::new(&problem.channels)?;
    match problem.q {
        q if q == 0.0 => ctx.wit_point(q),
        q if q == 1.0 => ctx.eh_point(q),
        q => ctx.optimize(q, None, &[], &problem.config),
    }
}

/// Boundary points at `q = 0, 1/(n-1), ..., 1`.
///
/// Thresholds are solved in ascending order, each warm-started from its
/// predecessor. A backward pass then re-solves any point beaten by its
/// higher-threshold neighbour (whose optimum is feasible for it), and a final
/// forward pass hands a point's solution to its successor whenever it also
/// meets the successor's floor with more energy.
pub fn rate_energy_region(
    channels: &ChannelSet,
    num_points: usize,
    config: &OptimizerConfig,
) -> Result<Vec<RateEnergyPoint>> {
    if num_points < 2 {
        return Err(Error::InvalidArgument(format!("a region needs at least two points, got {num_points}")));
    }
    if channels.len() != 2 {
        return Err(Error::Dimension(format!(
            "SWIPT needs exactly two channels (information, energy), got {}",
            channels.len()
        )));
    }
    config.validate()?;
    let ctx = Context::new(channels)?;
    let last = num_points - 1;
    let qs: Vec<f64> = (0..num_points).map(|k| if k == last { 1.0 } else { k as f64 / last as f64 }).collect();

    let mut points = Vec::with_capacity(num_points);
    points.push(ctx.wit_point(0.0)?);
    for &q in &qs[1..last] {
        let warm = points.last().map(|p: &RateEnergyPoint| vec![p.params.clone()]).unwrap_or_default();
        points.push(ctx.optimize(q, None, &warm, config)?);
    }
    points.push(ctx.eh_point(1.0)?);

    for k in (1..last).rev() {
        if points[k].rate < points[k + 1].rate {
            let neighbour = points[k + 1].params.clone();
            let own = points[k].params.clone();
            let resolved = ctx.optimize(qs[k], Some(&neighbour), &[own], config)?;
            if resolved.rate > points[k].rate {
                points[k] = resolved;
            }
        }
    }

    for k in 0..last {
        let (head, tail) = points.split_at_mut(k + 1);
        let (cur, next) = (&head[k], &mut tail[0]);
        if cur.energy > next.energy && cur.energy >= next.threshold && cur.rate >= next.rate && k + 1 != last {
            let q = next.q;
            let threshold = next.threshold;
            let diagnostics = next.diagnostics.clone();
            *next = RateEnergyPoint { q, threshold, diagnostics, ..cur.clone() };
        }
    }
    Ok(points)
}
