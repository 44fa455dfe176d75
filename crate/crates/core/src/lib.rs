//! Non-linear Bellman equations over finite tabular MDPs.
//!
//! The one-step bootstrap target `r + γv` generalizes to `f(r, v)`: this
//! crate implements the transform families (reward transforms, non-linear
//! value discounts, squashed targets, hyperbolic recursions), the exact
//! generalized operator with fixed-point iteration and contraction
//! diagnostics, tabular TD(0) against the same targets, return-ordering
//! checks between hyperbolic and transformed-exponential discounting, and
//! the parameter sweeps behind the discount-curve and action-gap tables.

pub mod error;
pub mod experiments;
pub mod mdp;
pub mod returns;
pub mod rng;
pub mod solvers;
pub mod transforms;

pub use error::{Error, Result};
pub use mdp::{Mdp, Outcome, Policy, RewardPoint, Trajectory, ValidationReport, Violation};
pub use rng::RngState;
pub use solvers::{ActionValueTable, SolveDiagnostics, StepSize, TdConfig, ValueVector};
pub use transforms::{DiscountFamily, DiscountFunction, RewardTransform, Squash, Transform};
