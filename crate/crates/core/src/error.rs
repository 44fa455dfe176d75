use thiserror::Error;

/// Errors raised by solvers, samplers, and transform evaluation.
///
/// Data-level problems with an MDP or policy (probability rows that do not
/// sum to one, terminal states with outgoing edges, ...) are *not* errors;
/// they are reported as [`crate::mdp::Violation`]s by validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state index {state} out of range (n_states = {n_states})")]
    InvalidState { state: usize, n_states: usize },

    #[error("action index {action} out of range at state {state} (n_actions = {n_actions})")]
    InvalidAction {
        state: usize,
        action: usize,
        n_actions: usize,
    },

    #[error("cannot sample a step from terminal state {state}")]
    TerminalState { state: usize },

    #[error("state {state} has no outcomes for action {action}")]
    MissingOutcomes { state: usize, action: usize },

    #[error("value vector length {got} does not match state count {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("hdtd target singular: |1 + k*v| = {denominator:e} is within the 1e-9 guard")]
    HdtdSingularity { denominator: f64 },

    #[error(
        "hdtd target singular at episode {episode}, step {step}: |1 + k*v| = {denominator:e}"
    )]
    HdtdSingularityAt {
        episode: usize,
        step: usize,
        denominator: f64,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(
        "divergence detected after {iterations} iterations: residual grew for {consecutive} consecutive sweeps (last residual {residual:e})"
    )]
    Divergence {
        iterations: usize,
        consecutive: usize,
        residual: f64,
    },

    #[error("outer log undefined: inner return {value} is not positive")]
    LogDomain { value: f64 },

    #[error("malformed sweep result: {0}")]
    MalformedSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
