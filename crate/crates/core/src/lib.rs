//! Transmit covariance design for MIMO SWIPT and max-min multicasting by
//! complex rotation modeling.
//!
//! A covariance `Q = V Λ V^H` is parameterized by non-negative power weights
//! and complex Givens angles, which turns the semidefinite and trace
//! constraints into the polyhedron `{λ ≥ 0, Σλ ≤ P}`. The problems are then
//! solved by a first-order maximizer over the parameters, warm-started from
//! the closed-form WIT and energy-harvesting solutions.

// Negated comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod multicast;
pub mod objectives;
pub mod optimizer;
pub mod rotation;
pub mod swipt;

pub use analytic::{eh_max, energy_of, rate_of, water_fill, wit_capacity, ChannelSet, WitSolution};
pub use error::{Error, Result};
pub use eval::{dominance_check, relative_improvement, sample_random_covariances, TrialCloud};
pub use multicast::{min_rate, multicast_solve, MulticastProblem, MulticastSolution, SubCase};
pub use optimizer::{maximize, OptimizerConfig, SolveReport};
pub use rotation::{
    build_covariance, build_unitary, decompose_covariance, givens_block, Covariance, LinearConstraintSystem,
    RotationParams,
};
pub use swipt::{energy_bounds, rate_energy_region, swipt_solve, RateEnergyPoint, SwiptProblem};
