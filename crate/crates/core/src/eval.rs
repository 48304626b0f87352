//! Random-covariance baselines and frontier checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{energy_of, rate_of, ChannelSet};
use crate::error::{Error, Result};
use crate::multicast::min_rate;
use crate::optimizer::random_start;
use crate::rotation::{build_covariance, Covariance};
use crate::swipt::RateEnergyPoint;

/// Draws `count` covariances with trace exactly `power`.
///
/// Sample `i` comes from its own ChaCha8 stream keyed by `(seed, i)`, so a
/// prefix of a larger draw equals a smaller draw with the same seed. Angles
/// are uniform on `(-π, π]` and power weights are flat-Dirichlet.
pub fn sample_random_covariances(m: usize, power: f64, count: usize, seed: u64) -> Result<Vec<Covariance>> {
    if m == 0 {
        return Err(Error::InvalidArgument("antenna count must be positive".into()));
    }
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::InvalidArgument(format!("power must be positive, got {power}")));
    }
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let params = random_start(m, power, &mut rng);
            Ok(build_covariance(&params)?.tagged(power))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    pub rate: f64,
    /// Harvested energy; absent for multicast clouds.
    pub energy: Option<f64>,
}

/// Random-covariance scatter used as a baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialCloud {
    pub points: Vec<CloudPoint>,
    pub seed: u64,
}

impl TrialCloud {
    /// `(R(H1), E(H2))` for each sample.
    pub fn swipt(channels: &ChannelSet, count: usize, seed: u64) -> Result<Self> {
        if channels.len() < 2 {
            return Err(Error::Dimension("SWIPT cloud needs two channels".into()));
        }
        let (h1, h2) = (channels.channel(0), channels.channel(1));
        let points = sample_random_covariances(channels.m(), channels.power(), count, seed)?
            .iter()
            .map(|q| Ok(CloudPoint { rate: rate_of(q, h1)?, energy: Some(energy_of(q, h2, channels.eta())?) }))
            .collect::<Result<_>>()?;
        Ok(Self { points, seed })
    }

    /// Common rate `min_k R_k` for each sample.
    pub fn multicast(channels: &ChannelSet, count: usize, seed: u64) -> Result<Self> {
        let points = sample_random_covariances(channels.m(), channels.power(), count, seed)?
            .iter()
            .map(|q| Ok(CloudPoint { rate: min_rate(q, channels)?, energy: None }))
            .collect::<Result<_>>()?;
        Ok(Self { points, seed })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_rate(&self) -> Option<f64> {
        self.points.iter().map(|p| p.rate).reduce(f64::max)
    }

    pub fn mean_rate(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.points.iter().map(|p| p.rate).sum::<f64>() / self.len() as f64)
    }
}

/// `(R_opt - R_base) / R_base`.
pub fn relative_improvement(optimized: f64, baseline: f64) -> Result<f64> {
    if !(baseline > 0.0) || !optimized.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "relative improvement needs a positive baseline rate, got {baseline}"
        )));
    }
    Ok((optimized - baseline) / baseline)
}

/// A cloud sample that lies above the frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceViolation {
    pub index: usize,
    pub rate: f64,
    pub energy: f64,
    pub frontier_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub checked: usize,
    pub violations: Vec<DominanceViolation>,
    /// Largest `rate - frontier_rate` over all samples (negative when every
    /// sample is strictly below the frontier).
    pub worst_excess: f64,
}

impl DominanceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Frontier rate at `energy`, linearly interpolated between boundary points
/// sorted by energy and held constant beyond either end.
pub fn frontier_rate_at(frontier: &[RateEnergyPoint], energy: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = frontier.iter().map(|p| (p.energy, p.rate)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let (first, last) = (*pts.first()?, *pts.last()?);
    if energy <= first.0 {
        return Some(first.1);
    }
    if energy >= last.0 {
        return Some(last.1);
    }
    let j = pts.partition_point(|p| p.0 < energy);
    let (lo, hi) = (pts[j - 1], pts[j]);
    if hi.0 - lo.0 <= f64::EPSILON * hi.0.abs().max(1.0) {
        return Some(lo.1.max(hi.1));
    }
    let t = (energy - lo.0) / (hi.0 - lo.0);
    Some(lo.1 + t * (hi.1 - lo.1))
}

/// Checks that no SWIPT cloud sample exceeds the frontier by more than `tol`
/// bits at its own energy.
pub fn dominance_check(frontier: &[RateEnergyPoint], cloud: &TrialCloud, tol: f64) -> Result<DominanceReport> {
    if frontier.is_empty() {
        return Err(Error::InvalidArgument("empty frontier".into()));
    }
    let mut violations = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (index, p) in cloud.points.iter().enumerate() {
        let energy = p.energy.ok_or_else(|| Error::InvalidArgument("cloud has no energy values".into()))?;
        let frontier_rate = frontier_rate_at(frontier, energy).unwrap_or(f64::NEG_INFINITY);
        let excess = p.rate - frontier_rate;
        worst = worst.max(excess);
        if excess > tol {
            violations.push(DominanceViolation { index, rate: p.rate, energy, frontier_rate });
        }
    }
    Ok(DominanceReport { checked: cloud.len(), violations, worst_excess: worst })
}
