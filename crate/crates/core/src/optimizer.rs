//! Maximizer over rotation parameters subject to `A r ≤ b` and at most one
//! smooth inequality `g(r) ≥ 0`.
//!
//! The λ-block is kept feasible by Euclidean projection onto the capped
//! simplex; the angle block is unconstrained. Each inner iteration is a
//! projected gradient step with a Barzilai-Borwein trial length and Armijo
//! backtracking. The nonlinear constraint is folded into the objective with
//! an augmented Lagrangian penalty whose weight grows until the iterate is
//! feasible, followed by a Gauss-Newton restoration step on `g`.
//!
//! Objectives may be the pointwise minimum of several smooth pieces. Then
//! the ascent direction is the minimum-norm element of the convex hull of
//! the near-active pieces' gradients (projected onto the tangent cone of the
//! λ-set), which is an ascent direction for the minimum whenever it is
//! nonzero.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rotation::{LinearConstraintSystem, RotationParams};

/// Armijo sufficient-increase parameter.
const ARMIJO: f64 = 1e-4;
/// Backtracking contraction factor.
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
/// Consecutive small-change iterations required to stop.
const STALL_WINDOW: usize = 5;
const MIN_STEP: f64 = 1e-12;
const MAX_STEP: f64 = 1e6;

/// Tunable solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Iteration cap for each inner ascent run.
    pub max_iterations: usize,
    /// Relative finite-difference step, scaled by `max(1, |r_i|)`.
    pub gradient_step: f64,
    /// Objective change below which an iteration counts as stalled.
    pub convergence_tol: f64,
    /// Feasibility tolerance on the linear and nonlinear constraints.
    pub constraint_tol: f64,
    /// Total number of starts, the caller's start included.
    pub restarts: usize,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    /// Cap on augmented Lagrangian rounds per start.
    pub penalty_rounds: usize,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            gradient_step: 1e-6,
            convergence_tol: 1e-8,
            constraint_tol: 1e-7,
            restarts: 8,
            penalty_init: 10.0,
            penalty_growth: 10.0,
            penalty_rounds: 30,
            rng_seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gradient_step", self.gradient_step),
            ("convergence_tol", self.convergence_tol),
            ("constraint_tol", self.constraint_tol),
            ("penalty_init", self.penalty_init),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.penalty_growth > 1.0) {
            return Err(Error::InvalidArgument("penalty_growth must exceed 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("at least one restart is required".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of [`maximize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub best_params: RotationParams,
    /// Objective value at `best_params` (the minimum over pieces).
    pub objective: f64,
    /// `A r - b` followed by `-g(r)` when a nonlinear constraint is present.
    pub constraint_residuals: Vec<f64>,
    pub iterations_used: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

impl SolveReport {
    pub fn max_violation(&self) -> f64 {
        self.constraint_residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(0.0)
    }
}

/// A function to maximize: the pointwise minimum of one or more smooth pieces.
///
/// Implementations must be pure; the solver may call them in any order.
pub trait Objective {
    /// Values of all pieces at `params`. Must be non-empty and of fixed length.
    fn pieces(&self, params: &RotationParams) -> Vec<f64>;

    fn value(&self, params: &RotationParams) -> f64 {
        self.pieces(params).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Gradients of every piece, when available in closed form. The solver
    /// falls back to finite differences on `None`.
    fn gradients(&self, _params: &RotationParams) -> Option<Vec<Vec<f64>>> {
        None
    }
}

/// Single smooth objective.
pub struct Smooth<F>(pub F);

impl<F: Fn(&RotationParams) -> f64> Objective for Smooth<F> {
    fn pieces(&self, params: &RotationParams) -> Vec<f64> {
        vec![(self.0)(params)]
    }

    fn value(&self, params: &RotationParams) -> f64 {
        (self.0)(params)
    }
}

/// Minimum of the smooth pieces returned by the closure.
pub struct PointwiseMin<F>(pub F);

impl<F: Fn(&RotationParams) -> Vec<f64>> Objective for PointwiseMin<F> {
    fn pieces(&self, params: &RotationParams) -> Vec<f64> {
        (self.0)(params)
    }
}

/// Constraint function `g`, feasible where `g(r) ≥ 0`.
pub trait Constraint {
    fn value(&self, params: &RotationParams) -> f64;

    fn gradient(&self, _params: &RotationParams) -> Option<Vec<f64>> {
        None
    }
}

impl<F: Fn(&RotationParams) -> f64> Constraint for F {
    fn value(&self, params: &RotationParams) -> f64 {
        self(params)
    }
}

/// Maximizes `objective` from `start` plus `config.restarts - 1` random starts.
pub fn maximize(
    objective: &dyn Objective,
    linear: &LinearConstraintSystem,
    nonlinear: Option<&dyn Constraint>,
    start: &RotationParams,
    config: &OptimizerConfig,
) -> Result<SolveReport> {
    maximize_from(objective, linear, nonlinear, start, &[], config)
}

/// As [`maximize`], with extra warm starts tried after `start` and before the
/// random ones. Extra starts need not satisfy the nonlinear constraint.
pub fn maximize_from(
    objective: &dyn Objective,
    linear: &LinearConstraintSystem,
    nonlinear: Option<&dyn Constraint>,
    start: &RotationParams,
    extra_starts: &[RotationParams],
    config: &OptimizerConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let m = linear.m();
    if start.m() != m || extra_starts.iter().any(|s| s.m() != m) {
        return Err(Error::Dimension(format!("start points must have {m} antennas")));
    }
    if !linear.is_satisfied(start, config.constraint_tol) {
        return Err(Error::Infeasible("start violates the linear constraints".into()));
    }
    if let Some(g) = nonlinear {
        let gv = g.value(start);
        if !(gv >= -config.constraint_tol) {
            return Err(Error::Infeasible(format!("start violates the nonlinear constraint (g = {gv:e})")));
        }
    }
    let start_value = objective.value(start);
    if !start_value.is_finite() {
        return Err(Error::NonFiniteObjective);
    }

    let scaled = nonlinear.map(|g| Scaled::at(g, start, config.gradient_step));
    let solver = Solver {
        objective,
        linear,
        nonlinear: scaled.as_ref().map(|g| g as &dyn Constraint),
        constraint_tol: config.constraint_tol / scaled.as_ref().map_or(1.0, |g| g.scale),
        config,
    };
    let mut best = Candidate { params: start.clone(), value: start_value, converged: false };
    let mut iterations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let total_starts = config.restarts.max(1 + extra_starts.len());

    for k in 0..total_starts {
        let x0 = if k == 0 {
            start.clone()
        } else if k <= extra_starts.len() {
            extra_starts[k - 1].clone()
        } else {
            random_start(m, linear.power(), &mut rng)
        };
        let run = solver.run(x0);
        iterations += run.iterations;
        if let Some(cand) = run.result {
            // Strict improvement keeps earlier starts on ties.
            if cand.value > best.value || (k == 0 && cand.value >= best.value) {
                best = cand;
            }
        }
    }

    let mut residuals = linear.residuals(&best.params);
    if let Some(g) = nonlinear {
        residuals.push(-g.value(&best.params));
    }
    let feasible = residuals.iter().all(|&r| r <= config.constraint_tol);
    Ok(SolveReport {
        best_params: best.params,
        objective: best.value,
        constraint_residuals: residuals,
        iterations_used: iterations,
        restarts_used: total_starts,
        converged: best.converged && feasible,
    })
}

/// Uniform angles in `(-π, π]` and uniform-simplex weights scaled to `power`.
pub fn random_start<R: Rng + ?Sized>(m: usize, power: f64, rng: &mut R) -> RotationParams {
    let mut p = RotationParams::zeros(m);
    let lambdas = uniform_simplex(m, power, rng);
    p.lambdas_mut().copy_from_slice(&lambdas);
    for a in &mut p.as_mut_slice()[m..] {
        *a = PI - 2.0 * PI * rng.random::<f64>();
    }
    p
}

/// Point drawn uniformly from `{x ≥ 0, Σx = total}` (flat Dirichlet).
pub fn uniform_simplex<R: Rng + ?Sized>(m: usize, total: f64, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = draws.iter().sum();
    if sum > 0.0 {
        draws.iter().map(|d| total * d / sum).collect()
    } else {
        vec![total / m as f64; m]
    }
}

/// Central finite-difference gradient of `f`, one-sided where the lower
/// bound `λ_i ≥ 0` would otherwise be crossed.
pub fn finite_difference_gradient(
    f: &dyn Fn(&RotationParams) -> f64,
    params: &RotationParams,
    step: f64,
) -> Vec<f64> {
    let m = params.m();
    let base = f(params);
    let mut x = params.clone();
    let mut grad = vec![0.0; params.len()];
    for i in 0..params.len() {
        let xi = params.as_slice()[i];
        let h = step * xi.abs().max(1.0);
        if i < m && xi - h < 0.0 {
            x.as_mut_slice()[i] = xi + h;
            grad[i] = (f(&x) - base) / h;
        } else {
            x.as_mut_slice()[i] = xi + h;
            let up = f(&x);
            x.as_mut_slice()[i] = xi - h;
            let down = f(&x);
            grad[i] = (up - down) / (2.0 * h);
        }
        x.as_mut_slice()[i] = xi;
    }
    grad
}

/// The nonlinear constraint divided by its gradient norm at the start, so
/// that the penalty weight is comparable to the objective's curvature.
struct Scaled<'a> {
    inner: &'a dyn Constraint,
    scale: f64,
}

impl<'a> Scaled<'a> {
    fn at(inner: &'a dyn Constraint, x: &RotationParams, step: f64) -> Self {
        let grad = inner
            .gradient(x)
            .unwrap_or_else(|| finite_difference_gradient(&|p: &RotationParams| inner.value(p), x, step));
        let norm = dot(&grad, &grad).sqrt();
        let scale = if norm.is_finite() && norm > 1e-12 { norm } else { 1.0 };
        Self { inner, scale }
    }
}

impl Constraint for Scaled<'_> {
    fn value(&self, params: &RotationParams) -> f64 {
        self.inner.value(params) / self.scale
    }

    fn gradient(&self, params: &RotationParams) -> Option<Vec<f64>> {
        let mut g = self.inner.gradient(params)?;
        for v in &mut g {
            *v /= self.scale;
        }
        Some(g)
    }
}

struct Candidate {
    params: RotationParams,
    value: f64,
    converged: bool,
}

struct Run {
    result: Option<Candidate>,
    iterations: usize,
}

struct Solver<'a> {
    objective: &'a dyn Objective,
    linear: &'a LinearConstraintSystem,
    nonlinear: Option<&'a dyn Constraint>,
    /// Feasibility tolerance in the units of `nonlinear`.
    constraint_tol: f64,
    config: &'a OptimizerConfig,
}

/// Augmented Lagrangian state for `g ≥ 0`.
#[derive(Clone, Copy)]
struct Penalty {
    multiplier: f64,
    weight: f64,
}

impl Penalty {
    fn apply(&self, g: f64) -> f64 {
        let shifted = (self.multiplier - self.weight * g).max(0.0);
        (shifted * shifted - self.multiplier * self.multiplier) / (2.0 * self.weight)
    }
}

struct InnerResult {
    params: RotationParams,
    iterations: usize,
    converged: bool,
}

impl<'a> Solver<'a> {
    fn run(&self, x0: RotationParams) -> Run {
        let mut x = x0;
        self.linear.project(&mut x);
        let Some(g) = self.nonlinear else {
            let inner = self.ascend(x, None);
            let value = self.objective.value(&inner.params);
            let result = value
                .is_finite()
                .then_some(Candidate { params: inner.params, value, converged: inner.converged });
            return Run { result, iterations: inner.iterations };
        };

        let tol = self.constraint_tol;
        let mut penalty = Penalty { multiplier: 0.0, weight: self.config.penalty_init };
        let mut iterations = 0;
        let mut converged = false;
        let mut previous_violation = f64::INFINITY;
        let mut previous_value = f64::NAN;
        for _ in 0..self.config.penalty_rounds {
            let inner = self.ascend(x, Some(penalty));
            iterations += inner.iterations;
            x = inner.params;
            let gx = g.value(&x);
            let violation = (-gx).max(0.0);
            let value = self.objective.value(&x);
            penalty.multiplier = (penalty.multiplier - penalty.weight * gx).max(0.0);
            // Multipliers jitter at the inner tolerance, so the outer loop
            // stops on a feasible point whose objective has stopped moving.
            let stationary = (value - previous_value).abs() <= self.config.convergence_tol * value.abs().max(1.0);
            if violation <= tol && inner.converged && stationary {
                converged = true;
                break;
            }
            if violation > tol && violation > 0.25 * previous_violation {
                penalty.weight *= self.config.penalty_growth;
            }
            previous_violation = violation;
            previous_value = value;
        }

        let restored = self.restore(x, g);
        let result = restored.and_then(|p| {
            let value = self.objective.value(&p);
            (value.is_finite() && g.value(&p) >= -tol).then_some(Candidate { params: p, value, converged })
        });
        Run { result, iterations }
    }

    /// Merit pieces and the constraint value at `x`.
    fn merit(&self, x: &RotationParams, penalty: Option<Penalty>) -> Vec<f64> {
        let mut pieces = self.objective.pieces(x);
        if let (Some(pen), Some(g)) = (penalty, self.nonlinear) {
            let cost = pen.apply(g.value(x));
            for v in &mut pieces {
                *v -= cost;
            }
        }
        pieces
    }

    fn merit_gradients(&self, x: &RotationParams, base: &[f64], penalty: Option<Penalty>) -> Vec<Vec<f64>> {
        if let Some(mut grads) = self.objective.gradients(x) {
            match (penalty, self.nonlinear) {
                (Some(pen), Some(g)) => {
                    if let Some(gg) = g.gradient(x) {
                        // d/dr of -pen(g) is max(0, μ - ρ g) ∇g.
                        let scale = (pen.multiplier - pen.weight * g.value(x)).max(0.0);
                        for grad in &mut grads {
                            for (a, b) in grad.iter_mut().zip(&gg) {
                                *a += scale * b;
                            }
                        }
                        return grads;
                    }
                }
                _ => return grads,
            }
        }
        let m = x.m();
        let n = x.len();
        let k = base.len();
        let mut grads = vec![vec![0.0; n]; k];
        let mut probe = x.clone();
        for i in 0..n {
            let xi = x.as_slice()[i];
            let h = self.config.gradient_step * xi.abs().max(1.0);
            if i < m && xi - h < 0.0 {
                probe.as_mut_slice()[i] = xi + h;
                let up = self.merit(&probe, penalty);
                for p in 0..k {
                    grads[p][i] = (up[p] - base[p]) / h;
                }
            } else {
                probe.as_mut_slice()[i] = xi + h;
                let up = self.merit(&probe, penalty);
                probe.as_mut_slice()[i] = xi - h;
                let down = self.merit(&probe, penalty);
                for p in 0..k {
                    grads[p][i] = (up[p] - down[p]) / (2.0 * h);
                }
            }
            probe.as_mut_slice()[i] = xi;
        }
        grads
    }

    fn ascend(&self, start: RotationParams, penalty: Option<Penalty>) -> InnerResult {
        let cfg = self.config;
        let mut x = start;
        let mut pieces = self.merit(&x, penalty);
        let mut fx = min_of(&pieces);
        if !fx.is_finite() {
            return InnerResult { params: x, iterations: 0, converged: false };
        }
        let mut step = f64::NAN;
        // Last displacement and the direction that produced it.
        let mut history: Option<(Vec<f64>, Vec<f64>)> = None;
        let mut stalled = 0;
        let mut iterations = 0;
        let mut converged = false;

        while iterations < cfg.max_iterations {
            iterations += 1;
            let grads = self.merit_gradients(&x, &pieces, penalty);

            let mut accepted = None;
            let mut spread = if pieces.len() > 1 { 1e-2 * fx.abs().max(1.0) } else { 0.0 };
            loop {
                let active: Vec<usize> = (0..pieces.len()).filter(|&p| pieces[p] <= fx + spread).collect();
                let direction = if active.len() == 1 {
                    grads[active[0]].clone()
                } else {
                    let projected: Vec<Vec<f64>> =
                        active.iter().map(|&p| self.tangent_project(&x, &grads[p])).collect();
                    min_norm_combination(&projected)
                };
                if norm_inf(&direction) == 0.0 {
                    break;
                }
                let trial_step = match &history {
                    Some((s, prev_dir)) => {
                        // Barzilai-Borwein length for ascent: s·s / -(s·y).
                        let sy: f64 = s.iter().zip(direction.iter().zip(prev_dir)).map(|(a, (d, p))| a * (d - p)).sum();
                        if sy < 0.0 {
                            dot(s, s) / -sy
                        } else {
                            step * 4.0
                        }
                    }
                    None if step.is_finite() => step,
                    None => 1.0 / norm_inf(&direction).max(1e-12),
                };
                if let Some(found) = self.line_search(&x, fx, &direction, &grads, &active, trial_step, penalty) {
                    accepted = Some((found, direction));
                    break;
                }
                if active.len() == 1 || spread < 1e-10 {
                    break;
                }
                spread *= 0.01;
            }

            let Some(((next, next_pieces, next_value, used_step), direction)) = accepted else {
                converged = true;
                break;
            };

            let s: Vec<f64> = next.as_slice().iter().zip(x.as_slice()).map(|(a, b)| a - b).collect();
            let change = next_value - fx;
            x = next;
            pieces = next_pieces;
            fx = next_value;
            history = Some((s, direction));
            step = used_step;

            if change.abs() < cfg.convergence_tol {
                stalled += 1;
                if stalled >= STALL_WINDOW {
                    converged = true;
                    break;
                }
            } else {
                stalled = 0;
            }
        }
        InnerResult { params: x, iterations, converged }
    }

    #[allow(clippy::too_many_arguments)]
    fn line_search(
        &self,
        x: &RotationParams,
        fx: f64,
        direction: &[f64],
        grads: &[Vec<f64>],
        active: &[usize],
        initial_step: f64,
        penalty: Option<Penalty>,
    ) -> Option<(RotationParams, Vec<f64>, f64, f64)> {
        let mut step = initial_step.clamp(MIN_STEP, MAX_STEP);
        for _ in 0..MAX_BACKTRACKS {
            let mut trial = x.clone();
            for (t, d) in trial.as_mut_slice().iter_mut().zip(direction) {
                *t += step * d;
            }
            self.linear.project(&mut trial);
            let disp: Vec<f64> = trial.as_slice().iter().zip(x.as_slice()).map(|(a, b)| a - b).collect();
            if norm_inf(&disp) == 0.0 {
                return None;
            }
            let predicted = active.iter().map(|&p| dot(&grads[p], &disp)).fold(f64::INFINITY, f64::min);
            if predicted > 0.0 {
                let pieces = self.merit(&trial, penalty);
                let value = min_of(&pieces);
                if value.is_finite() && value >= fx + ARMIJO * predicted {
                    return Some((trial, pieces, value, step));
                }
            }
            step *= BACKTRACK;
            if step < MIN_STEP {
                return None;
            }
        }
        None
    }

    /// Projects a gradient onto the tangent cone of the λ-set at `x`.
    fn tangent_project(&self, x: &RotationParams, grad: &[f64]) -> Vec<f64> {
        let m = x.m();
        let power = self.linear.power();
        let lambdas = x.lambdas();
        let at_zero: Vec<bool> = lambdas.iter().map(|&l| l <= 1e-12 * power).collect();
        let sum_active = lambdas.iter().sum::<f64>() >= power * (1.0 - 1e-12);
        let shifted = |nu: f64| -> Vec<f64> {
            (0..m)
                .map(|i| if at_zero[i] { (grad[i] - nu).max(0.0) } else { grad[i] - nu })
                .collect()
        };
        let mut nu = 0.0;
        if sum_active && shifted(0.0).iter().sum::<f64>() > 0.0 {
            let (mut lo, mut hi) = (0.0, grad[..m].iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if shifted(mid).iter().sum::<f64>() > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            nu = hi;
        }
        let mut out = grad.to_vec();
        if sum_active || at_zero.iter().any(|&z| z) {
            out[..m].copy_from_slice(&shifted(nu));
        }
        out
    }

    /// Moves `x` onto `g ≥ 0` by projected Gauss-Newton steps on `g`.
    fn restore(&self, mut x: RotationParams, g: &dyn Constraint) -> Option<RotationParams> {
        let tol = self.constraint_tol;
        for _ in 0..50 {
            let gx = g.value(&x);
            if gx >= 0.0 {
                return Some(x);
            }
            let grad = g
                .gradient(&x)
                .unwrap_or_else(|| finite_difference_gradient(&|p: &RotationParams| g.value(p), &x, self.config.gradient_step));
            let norm2 = dot(&grad, &grad);
            if norm2 == 0.0 {
                break;
            }
            let target = -gx + 0.1 * tol;
            let mut step = target / norm2;
            let mut moved = false;
            for _ in 0..30 {
                let mut trial = x.clone();
                for (t, d) in trial.as_mut_slice().iter_mut().zip(&grad) {
                    *t += step * d;
                }
                self.linear.project(&mut trial);
                if g.value(&trial) > gx {
                    x = trial;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (g.value(&x) >= -tol).then_some(x)
    }
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Minimum-norm point of the convex hull of `vectors` (Frank-Wolfe with
/// exact line search on the simplex weights).
pub fn min_norm_combination(vectors: &[Vec<f64>]) -> Vec<f64> {
    let k = vectors.len();
    if k == 1 {
        return vectors[0].clone();
    }
    let gram: Vec<Vec<f64>> = (0..k).map(|a| (0..k).map(|b| dot(&vectors[a], &vectors[b])).collect()).collect();
    let mut w = vec![1.0 / k as f64; k];
    for _ in 0..500 {
        // Gradient of w^T G w is 2 G w.
        let gw: Vec<f64> = (0..k).map(|a| dot(&gram[a], &w)).collect();
        let vertex = (0..k)
            .min_by(|&a, &b| gw[a].partial_cmp(&gw[b]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(0);
        // Exact line search between w and the vertex e_s.
        let wgw = dot(&w, &gw);
        let gap = wgw - gw[vertex];
        if gap <= 1e-15 * wgw.abs().max(1e-300) {
            break;
        }
        let denom = wgw - 2.0 * gw[vertex] + gram[vertex][vertex];
        let t = if denom > 0.0 { (gap / denom).clamp(0.0, 1.0) } else { 1.0 };
        for (a, wa) in w.iter_mut().enumerate() {
            *wa *= 1.0 - t;
            if a == vertex {
                *wa += t;
            }
        }
    }
    let n = vectors[0].len();
    (0..n).map(|i| (0..k).map(|a| w[a] * vectors[a][i]).sum()).collect()
}
