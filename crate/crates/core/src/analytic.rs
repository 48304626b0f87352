//! Closed-form sub-solvers: WIT capacity by eigenmode water-filling and
//! maximum energy transfer by dominant-eigenvector beamforming.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, LN_2};
use crate::rotation::{covariance_from, Covariance};

/// Energy conversion rate used when none is given.
pub const DEFAULT_ETA: f64 = 1.0;

/// Receiver channels `H_k` (each `n_k × m`) of one transmitter, with its
/// power budget and energy conversion rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    channels: Vec<CMatrix>,
    power: f64,
    eta: f64,
}

impl ChannelSet {
    pub fn new(channels: Vec<CMatrix>, power: f64, eta: f64) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one channel is required".into()))?;
        let m = first.ncols();
        if m == 0 {
            return Err(Error::Dimension("channels need at least one transmit antenna".into()));
        }
        for (k, h) in channels.iter().enumerate() {
            if h.ncols() != m {
                return Err(Error::Dimension(format!(
                    "channel {} has {} columns, expected {m}",
                    k + 1,
                    h.ncols()
                )));
            }
            if h.nrows() == 0 {
                return Err(Error::Dimension(format!("channel {} has no receive antennas", k + 1)));
            }
            if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("channel {} has non-finite entries", k + 1)));
            }
        }
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidArgument(format!("power budget must be positive, got {power}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("energy conversion rate must be positive, got {eta}")));
        }
        Ok(Self { channels, power, eta })
    }

    /// Transmit antenna count.
    pub fn m(&self) -> usize {
        self.channels[0].ncols()
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[CMatrix] {
        &self.channels
    }

    pub fn channel(&self, k: usize) -> &CMatrix {
        &self.channels[k]
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Same channels under a different power budget.
    pub fn with_power(&self, power: f64) -> Result<Self> {
        Self::new(self.channels.clone(), power, self.eta)
    }
}

/// Capacity-achieving covariance for a single receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct WitSolution {
    pub covariance: Covariance,
    pub rate: f64,
    pub active_modes: usize,
}

/// Optimal power split over parallel channels with gains `gains`:
/// `p_i = max(0, μ - 1/g_i)` with `Σp_i = power`.
///
/// The water level is found with the active-set reduction over gains sorted
/// descending and then refined by bisection on `μ`.
pub fn water_fill(gains: &[f64], power: f64) -> Result<Vec<f64>> {
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidArgument(format!("power budget must be positive, got {power}")));
    }
    if gains.iter().any(|&g| g < 0.0 || !g.is_finite()) {
        return Err(Error::InvalidArgument("gains must be finite and non-negative".into()));
    }
    if !gains.iter().any(|&g| g > 0.0) {
        return Err(Error::InvalidArgument("all gains are zero: no information channel".into()));
    }
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    order.sort_by(|&a, &b| gains[b].partial_cmp(&gains[a]).unwrap_or(std::cmp::Ordering::Equal));

    // Largest k such that the k strongest modes all receive positive power.
    let mut mu = 0.0;
    let mut inv_sum = 0.0;
    for (k, &i) in order.iter().enumerate() {
        inv_sum += 1.0 / gains[i];
        let level = (power + inv_sum) / (k as f64 + 1.0);
        if level - 1.0 / gains[i] > 0.0 {
            mu = level;
        } else {
            break;
        }
    }

    let allocated = |mu: f64| -> f64 { order.iter().map(|&i| (mu - 1.0 / gains[i]).max(0.0)).sum() };
    let (mut lo, mut hi) = (mu * (1.0 - 1e-9) - 1e-12, mu * (1.0 + 1e-9) + 1e-12);
    while allocated(lo) > power {
        lo -= (hi - lo).max(1e-12);
    }
    while allocated(hi) < power {
        hi += (hi - lo).max(1e-12);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let residual = allocated(mid) - power;
        if residual.abs() <= 1e-12 * power.max(1.0) {
            mu = mid;
            break;
        }
        if residual > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        mu = mid;
    }

    let mut powers = vec![0.0; gains.len()];
    for &i in &order {
        powers[i] = (mu - 1.0 / gains[i]).max(0.0);
    }
    Ok(powers)
}

/// Eigenmodes of `H^H H`: squared singular values (descending, clamped at
/// zero) and matching right singular vectors as columns.
pub fn right_singular_modes(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let gram = linalg::congruence(&h.adjoint(), &linalg::identity(h.nrows()));
    let (values, vectors) = linalg::hermitian_eigen_desc(&gram);
    (values.into_iter().map(|v| v.max(0.0)).collect(), vectors)
}

fn ensure_nonzero(h: &CMatrix) -> Result<()> {
    if linalg::max_abs(h) == 0.0 {
        Err(Error::ZeroChannel)
    } else {
        Ok(())
    }
}

/// Capacity-achieving covariance `V_r diag(p) V_r^H` for channel `h`.
pub fn wit_capacity(h: &CMatrix, power: f64) -> Result<WitSolution> {
    ensure_nonzero(h)?;
    let (gains, modes) = right_singular_modes(h);
    let powers = water_fill(&gains, power)?;
    let rate = gains.iter().zip(&powers).map(|(g, p)| (1.0 + g * p).log2()).sum();
    let active_modes = powers.iter().filter(|&&p| p > 0.0).count();
    let covariance = Covariance::from_hermitian_unchecked(covariance_from(&modes, &powers)).tagged(power);
    Ok(WitSolution { covariance, rate, active_modes })
}

/// Beamforming covariance `P v v^H` along the dominant right singular vector
/// and the resulting maximal harvested energy `η P σ_max²`.
pub fn eh_max(h: &CMatrix, power: f64, eta: f64) -> Result<(Covariance, f64)> {
    ensure_nonzero(h)?;
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidArgument(format!("power budget must be positive, got {power}")));
    }
    let (gains, modes) = right_singular_modes(h);
    let m = h.ncols();
    let mut lambdas = vec![0.0; m];
    lambdas[0] = power;
    let q = Covariance::from_hermitian_unchecked(covariance_from(&modes, &lambdas)).tagged(power);
    Ok((q, eta * power * gains[0]))
}

fn check_shapes(q: &CMatrix, h: &CMatrix) -> Result<()> {
    if q.nrows() != h.ncols() {
        return Err(Error::Dimension(format!(
            "covariance is {}x{} but channel has {} columns",
            q.nrows(),
            q.ncols(),
            h.ncols()
        )));
    }
    Ok(())
}

/// `log2 det(I + H Q H^H)` assuming shapes agree. Falls back to zero when the
/// matrix is numerically singular, which only happens for infeasible `Q`.
pub(crate) fn log_det_rate(q: &CMatrix, h: &CMatrix) -> f64 {
    let mut s = linalg::congruence(h, q);
    for i in 0..s.nrows() {
        s[(i, i)].re += 1.0;
    }
    match linalg::ln_det_hpd(s) {
        Some(v) => v / LN_2,
        None => f64::NEG_INFINITY,
    }
}

/// Achievable rate `log2 det(I + H Q H^H)` in bits per channel use.
pub fn rate_of(q: &Covariance, h: &CMatrix) -> Result<f64> {
    check_shapes(q.matrix(), h)?;
    Ok(log_det_rate(q.matrix(), h).max(0.0))
}

pub(crate) fn energy_raw(q: &CMatrix, h: &CMatrix, eta: f64) -> f64 {
    // tr(H Q H^H) = Σ_{r} h_r Q h_r^H over rows of H.
    let mut total = 0.0;
    for r in 0..h.nrows() {
        for a in 0..q.nrows() {
            let ha = h[(r, a)];
            for b in 0..q.ncols() {
                total += (ha * q[(a, b)] * h[(r, b)].conj()).re;
            }
        }
    }
    eta * total
}

/// Harvested energy `η tr(H Q H^H)` in watts.
pub fn energy_of(q: &Covariance, h: &CMatrix, eta: f64) -> Result<f64> {
    check_shapes(q.matrix(), h)?;
    Ok(energy_raw(q.matrix(), h, eta).max(0.0))
}
