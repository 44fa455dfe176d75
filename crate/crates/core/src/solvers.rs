//! Generalized Bellman operator, fixed-point iteration, tabular TD(0), and
//! empirical contraction estimation.
//!
//! The operator and action-value computations take exact expectations over
//! the finite-support model; sampling is confined to [`td0`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::{sample_action, sample_step, Mdp, Policy};
use crate::rng::RngState;
use crate::transforms::Transform;

/// Default sup-norm tolerance for [`fixed_point`].
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default sweep cap for [`fixed_point`].
pub const DEFAULT_MAX_ITERS: usize = 100_000;
/// Default constant TD step size.
pub const DEFAULT_TD_ALPHA: f64 = 0.05;
/// Abort fixed-point iteration after this many consecutive residual
/// increases. Matters for targets without a contraction certificate.
pub const DIVERGENCE_WINDOW: usize = 100;

/// One scalar value per state. Terminal entries stay 0 in solver outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueVector(pub Vec<f64>);

impl ValueVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        sup_dist(&self.0, &other.0)
    }
}

impl From<Vec<f64>> for ValueVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl std::ops::Index<usize> for ValueVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for ValueVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Dense `n_states × n_actions` table of action values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<f64>>", try_from = "Vec<Vec<f64>>")]
pub struct ActionValueTable {
    n_states: usize,
    n_actions: usize,
    values: Vec<f64>,
}

impl ActionValueTable {
    pub fn zeros(n_states: usize, n_actions: usize) -> Self {
        Self {
            n_states,
            n_actions,
            values: vec![0.0; n_states * n_actions],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.n_actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, q: f64) {
        self.values[state * self.n_actions + action] = q;
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.n_actions..(state + 1) * self.n_actions]
    }
}

impl From<ActionValueTable> for Vec<Vec<f64>> {
    fn from(q: ActionValueTable) -> Self {
        (0..q.n_states).map(|s| q.row(s).to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for ActionValueTable {
    type Error = String;

    fn try_from(rows: Vec<Vec<f64>>) -> std::result::Result<Self, String> {
        if rows.is_empty() {
            return Err("action value table must have at least one state".into());
        }
        let n_actions = rows[0].len();
        if n_actions == 0 || rows.iter().any(|r| r.len() != n_actions) {
            return Err("action value table rows must be non-empty and rectangular".into());
        }
        Ok(Self {
            n_states: rows.len(),
            n_actions,
            values: rows.into_iter().flatten().collect(),
        })
    }
}

/// TD step-size schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Constant(f64),
    /// `α_n(s) = 1/n(s)` with per-state visit counts.
    VisitationDecay,
}

/// Configuration for [`td0`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdConfig {
    pub step: StepSize,
    pub episodes: usize,
    /// Per-episode step cap; episodes also end at terminal states.
    pub horizon: usize,
    pub seed: u64,
}

impl Default for TdConfig {
    fn default() -> Self {
        Self {
            step: StepSize::Constant(DEFAULT_TD_ALPHA),
            episodes: 10_000,
            horizon: 1_000,
            seed: 0,
        }
    }
}

/// Solver run summary.
///
/// For [`fixed_point`], `iterations` counts operator applications,
/// `final_residual` is the last sup-norm sweep difference, and
/// `empirical_rate` is the geometric mean of successive residual ratios
/// (0 when fewer than two sweeps were recorded). For [`td0`], `iterations`
/// counts TD updates, `final_residual` is the largest absolute TD error seen
/// in the final episode, and `converged` is always false since no stopping
/// criterion is checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub empirical_rate: f64,
    /// Full per-sweep residual trace (not serialized).
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl SolveDiagnostics {
    fn from_residuals(iterations: usize, converged: bool, residuals: Vec<f64>) -> Self {
        let final_residual = residuals.last().copied().unwrap_or(0.0);
        let empirical_rate = match (residuals.first(), residuals.last()) {
            (Some(&first), Some(&last)) if residuals.len() >= 2 && first > 0.0 && last > 0.0 => {
                (last / first).powf(1.0 / (residuals.len() - 1) as f64)
            }
            _ => 0.0,
        };
        Self {
            iterations,
            final_residual,
            converged,
            empirical_rate,
            residuals,
        }
    }
}

/// One exact sweep of the generalized operator:
/// `(Tv)(s) = Σ_a π(a|s) Σ_{s'} p(s'|s,a) Σ_r p(r|s,a,s') f(r, v(s'))`.
///
/// Targets bootstrap from 0 at terminal successors regardless of the entries
/// of `v`, and terminal rows of the output are 0.
pub fn apply_operator(
    mdp: &Mdp,
    policy: &Policy,
    transform: &Transform,
    v: &ValueVector,
) -> Result<ValueVector> {
    if v.len() != mdp.n_states() {
        return Err(Error::DimensionMismatch {
            got: v.len(),
            expected: mdp.n_states(),
        });
    }
    let mut out = ValueVector::zeros(mdp.n_states());
    for s in 0..mdp.n_states() {
        if mdp.is_terminal(s) {
            continue;
        }
        let mut acc = 0.0;
        for &(a, pa) in policy.action_probs(s) {
            if pa == 0.0 {
                continue;
            }
            acc += pa * expected_target(mdp, transform, v, s, a)?;
        }
        out[s] = acc;
    }
    Ok(out)
}

fn expected_target(
    mdp: &Mdp,
    transform: &Transform,
    v: &ValueVector,
    state: usize,
    action: usize,
) -> Result<f64> {
    let mut acc = 0.0;
    for outcome in mdp.outcomes(state, action) {
        let bootstrap = if mdp.is_terminal(outcome.next_state) {
            0.0
        } else {
            v[outcome.next_state]
        };
        for rp in &outcome.rewards {
            acc += outcome.prob * rp.prob * transform.target(rp.value, bootstrap)?;
        }
    }
    Ok(acc)
}

/// Iterate `v ← Tv` until the sup-norm sweep difference drops below `tol`.
///
/// Residuals growing for [`DIVERGENCE_WINDOW`] consecutive sweeps abort with
/// a divergence error; exhausting `max_iters` is a non-convergence error.
pub fn fixed_point(
    mdp: &Mdp,
    policy: &Policy,
    transform: &Transform,
    v0: ValueVector,
    tol: f64,
    max_iters: usize,
) -> Result<(ValueVector, SolveDiagnostics)> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be positive".into()));
    }
    let mut v = v0;
    let mut residuals = Vec::new();
    let mut growing = 0usize;
    let mut prev = f64::INFINITY;
    for i in 1..=max_iters {
        let w = apply_operator(mdp, policy, transform, &v)?;
        let r = w.sup_distance(&v);
        residuals.push(r);
        if r < tol {
            return Ok((w, SolveDiagnostics::from_residuals(i, true, residuals)));
        }
        if r > prev {
            growing += 1;
            if growing >= DIVERGENCE_WINDOW {
                return Err(Error::Divergence {
                    iterations: i,
                    consecutive: growing,
                    residual: r,
                });
            }
        } else {
            growing = 0;
        }
        prev = r;
        v = w;
    }
    Err(Error::NonConvergence {
        iterations: max_iters,
        residual: prev,
    })
}

/// Tabular TD(0) with the generalized target `Y = f(R, v(S'))`.
///
/// Runs `cfg.episodes` rollouts under `policy`, starting each episode
/// uniformly over the non-terminal states; per transition applies
/// `v(S) ← v(S) + α(f(R, v(S')) − v(S))` with `v(terminal) = 0`.
/// Deterministic given `cfg.seed`.
pub fn td0(
    mdp: &Mdp,
    policy: &Policy,
    transform: &Transform,
    cfg: &TdConfig,
) -> Result<(ValueVector, SolveDiagnostics)> {
    if let StepSize::Constant(alpha) = cfg.step {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "TD step size must be in (0,1], got {alpha}"
            )));
        }
    }
    let n = mdp.n_states();
    let starts: Vec<usize> = (0..n).filter(|&s| !mdp.is_terminal(s)).collect();
    if starts.is_empty() {
        return Err(Error::InvalidParameter(
            "td0 requires at least one non-terminal state".into(),
        ));
    }
    let mut rng = RngState::from_seed(cfg.seed);
    let mut v = ValueVector::zeros(n);
    let mut counts = vec![0usize; n];
    let mut updates = 0usize;
    let mut last_episode_peak = 0.0f64;
    for episode in 0..cfg.episodes {
        let mut state = starts[rng.below(starts.len())];
        let mut peak = 0.0f64;
        for step in 0..cfg.horizon {
            let action = sample_action(policy, state, &mut rng);
            let (reward, next_state, terminal) = sample_step(mdp, state, action, &mut rng)?;
            let bootstrap = if terminal { 0.0 } else { v[next_state] };
            let target = transform.target(reward, bootstrap).map_err(|e| match e {
                Error::HdtdSingularity { denominator } => Error::HdtdSingularityAt {
                    episode,
                    step,
                    denominator,
                },
                other => other,
            })?;
            counts[state] += 1;
            let alpha = match cfg.step {
                StepSize::Constant(a) => a,
                StepSize::VisitationDecay => 1.0 / counts[state] as f64,
            };
            let delta = target - v[state];
            peak = peak.max(delta.abs());
            v[state] += alpha * delta;
            updates += 1;
            if terminal {
                break;
            }
            state = next_state;
        }
        last_episode_peak = peak;
    }
    let diag = SolveDiagnostics {
        iterations: updates,
        final_residual: last_episode_peak,
        converged: false,
        empirical_rate: 0.0,
        residuals: Vec::new(),
    };
    Ok((v, diag))
}

/// Exact one-step action values `q(s,a) = Σ_{s'} p(s'|s,a) Σ_r p(r) f(r, v(s'))`.
///
/// `v` is usually a fixed point, but this is not enforced. Terminal rows
/// are 0.
pub fn action_values(mdp: &Mdp, transform: &Transform, v: &ValueVector) -> Result<ActionValueTable> {
    if v.len() != mdp.n_states() {
        return Err(Error::DimensionMismatch {
            got: v.len(),
            expected: mdp.n_states(),
        });
    }
    let mut q = ActionValueTable::zeros(mdp.n_states(), mdp.n_actions());
    for s in 0..mdp.n_states() {
        if mdp.is_terminal(s) {
            continue;
        }
        for a in 0..mdp.n_actions() {
            q.set(s, a, expected_target(mdp, transform, v, s, a)?);
        }
    }
    Ok(q)
}

/// Deterministic greedy policy from a q-table; ties break toward the lowest
/// action index.
pub fn greedy_policy(q: &ActionValueTable) -> Policy {
    let actions: Vec<usize> = (0..q.n_states())
        .map(|s| {
            let row = q.row(s);
            let mut best = 0;
            for (a, &qa) in row.iter().enumerate() {
                if qa > row[best] {
                    best = a;
                }
            }
            best
        })
        .collect();
    Policy::deterministic(q.n_actions(), &actions)
}

/// Empirical contraction factor: the largest observed ratio
/// `‖Tv₁ − Tv₂‖_∞ / ‖v₁ − v₂‖_∞` over `pairs` value pairs sampled uniformly
/// from `[-v_max, v_max]^n`. Pairs closer than 1e-12 in sup norm are
/// resampled. Each pair draws from its own RNG stream, so the result is
/// independent of scheduling.
pub fn empirical_contraction(
    mdp: &Mdp,
    policy: &Policy,
    transform: &Transform,
    pairs: usize,
    v_max: f64,
    seed: u64,
) -> Result<f64> {
    if pairs == 0 {
        return Err(Error::InvalidParameter("pairs must be >= 1".into()));
    }
    if !(v_max > 0.0) {
        return Err(Error::InvalidParameter("v_max must be positive".into()));
    }
    let n = mdp.n_states();
    let ratios: Result<Vec<f64>> = (0..pairs)
        .into_par_iter()
        .map(|pair| {
            let mut rng = RngState::from_seed_stream(seed, pair as u64);
            loop {
                let v1 = ValueVector((0..n).map(|_| rng.uniform(-v_max, v_max)).collect());
                let v2 = ValueVector((0..n).map(|_| rng.uniform(-v_max, v_max)).collect());
                let denom = v1.sup_distance(&v2);
                if denom < 1e-12 {
                    continue;
                }
                let t1 = apply_operator(mdp, policy, transform, &v1)?;
                let t2 = apply_operator(mdp, policy, transform, &v2)?;
                return Ok(t1.sup_distance(&t2) / denom);
            }
        })
        .collect();
    Ok(ratios?.into_iter().fold(0.0, f64::max))
}

/// Default sampling radius for [`empirical_contraction`]:
/// `R_max/(1−γ)` when the transform has a discount γ < 1, otherwise
/// `10·R_max` (and 1 for reward-free models).
pub fn default_v_max(mdp: &Mdp, transform: &Transform) -> f64 {
    let r_max = mdp.max_abs_reward();
    if r_max == 0.0 {
        return 1.0;
    }
    match transform.gamma() {
        Some(gamma) if gamma < 1.0 => r_max / (1.0 - gamma),
        _ => 10.0 * r_max,
    }
}
