//! Rate and energy as functions of rotation parameters, with closed-form
//! gradients for the optimizer.

use crate::analytic::{energy_raw, log_det_rate};
use crate::linalg::{self, CMatrix, LN_2};
use crate::optimizer::{Constraint, Objective};
use crate::rotation::{covariance_chain_rule, RotationParams};

/// `∂/∂Q log2 det(I + H Q H^H) = H^H (I + H Q H^H)^{-1} H / ln 2`.
fn rate_gradient_in_q(q: &CMatrix, h: &CMatrix) -> Option<CMatrix> {
    let mut s = linalg::congruence(h, q);
    for i in 0..s.nrows() {
        s[(i, i)].re += 1.0;
    }
    let chol = nalgebra::Cholesky::new(s)?;
    let solved = chol.solve(h);
    let mut g = h.adjoint() * solved / nalgebra::Complex::new(LN_2, 0.0);
    linalg::symmetrize(&mut g);
    Some(g)
}

/// Information rate `log2 det(I + H Q(r) H^H)` to one receiver.
pub struct RateObjective<'a> {
    pub channel: &'a CMatrix,
}

impl<'a> RateObjective<'a> {
    pub fn new(channel: &'a CMatrix) -> Self {
        Self { channel }
    }

    pub fn gradient(&self, params: &RotationParams) -> Option<Vec<f64>> {
        let q = params.covariance_matrix();
        rate_gradient_in_q(&q, self.channel).map(|g| covariance_chain_rule(params, &g))
    }
}

impl Objective for RateObjective<'_> {
    fn pieces(&self, params: &RotationParams) -> Vec<f64> {
        vec![self.value(params)]
    }

    fn value(&self, params: &RotationParams) -> f64 {
        log_det_rate(&params.covariance_matrix(), self.channel)
    }

    fn gradients(&self, params: &RotationParams) -> Option<Vec<Vec<f64>>> {
        self.gradient(params).map(|g| vec![g])
    }
}

/// Per-user rates whose minimum is the common multicast rate.
pub struct MinRateObjective<'a> {
    pub channels: &'a [CMatrix],
}

impl Objective for MinRateObjective<'_> {
    fn pieces(&self, params: &RotationParams) -> Vec<f64> {
        let q = params.covariance_matrix();
        self.channels.iter().map(|h| log_det_rate(&q, h)).collect()
    }

    fn gradients(&self, params: &RotationParams) -> Option<Vec<Vec<f64>>> {
        let q = params.covariance_matrix();
        self.channels
            .iter()
            .map(|h| rate_gradient_in_q(&q, h).map(|g| covariance_chain_rule(params, &g)))
            .collect()
    }
}

/// Harvested energy floor `η tr(H Q(r) H^H) - threshold ≥ 0`.
pub struct EnergyConstraint<'a> {
    pub channel: &'a CMatrix,
    pub eta: f64,
    pub threshold: f64,
}

impl EnergyConstraint<'_> {
    pub fn energy(&self, params: &RotationParams) -> f64 {
        energy_raw(&params.covariance_matrix(), self.channel, self.eta)
    }
}

impl Constraint for EnergyConstraint<'_> {
    fn value(&self, params: &RotationParams) -> f64 {
        self.energy(params) - self.threshold
    }

    fn gradient(&self, params: &RotationParams) -> Option<Vec<f64>> {
        let mut g = self.channel.adjoint() * self.channel * nalgebra::Complex::new(self.eta, 0.0);
        linalg::symmetrize(&mut g);
        Some(covariance_chain_rule(params, &g))
    }
}
