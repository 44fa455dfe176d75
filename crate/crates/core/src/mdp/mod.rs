//! Finite tabular MDPs, policies, and seeded simulation.
//!
//! Rewards are finite-support discrete distributions so that every one-step
//! expectation used by the operators is computable in closed form. Terminal
//! states carry no outgoing transitions and have value 0 by convention.

pub mod generators;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngState;

/// Tolerance for probability rows summing to one. Loose enough to absorb
/// accumulated decimal literals in hand-written JSON.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// One atom of a finite-support reward distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardPoint {
    #[serde(rename = "r")]
    pub value: f64,
    #[serde(rename = "p")]
    pub prob: f64,
}

/// One stochastic successor of a `(state, action)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    #[serde(rename = "s2")]
    pub next_state: usize,
    #[serde(rename = "p")]
    pub prob: f64,
    pub rewards: Vec<RewardPoint>,
}

impl Outcome {
    /// Successor with a single deterministic reward.
    pub fn new(next_state: usize, prob: f64, reward: f64) -> Self {
        Self {
            next_state,
            prob,
            rewards: vec![RewardPoint {
                value: reward,
                prob: 1.0,
            }],
        }
    }

    pub fn with_rewards(next_state: usize, prob: f64, rewards: Vec<RewardPoint>) -> Self {
        Self {
            next_state,
            prob,
            rewards,
        }
    }
}

/// Finite tabular MDP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::MdpWire", into = "wire::MdpWire")]
pub struct Mdp {
    n_states: usize,
    n_actions: usize,
    terminal: Vec<bool>,
    /// `outcomes[s][a]`, empty for terminal states.
    outcomes: Vec<Vec<Vec<Outcome>>>,
}

impl Mdp {
    /// Empty MDP skeleton: all states non-terminal, no transitions yet.
    pub fn new(n_states: usize, n_actions: usize) -> Self {
        assert!(n_states > 0 && n_actions > 0);
        Self {
            n_states,
            n_actions,
            terminal: vec![false; n_states],
            outcomes: vec![vec![Vec::new(); n_actions]; n_states],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }

    pub fn set_terminal(&mut self, state: usize, flag: bool) {
        self.terminal[state] = flag;
    }

    pub fn outcomes(&self, state: usize, action: usize) -> &[Outcome] {
        &self.outcomes[state][action]
    }

    /// Replace the outcome list of `(state, action)`.
    pub fn set_outcomes(&mut self, state: usize, action: usize, outcomes: Vec<Outcome>) {
        for o in &outcomes {
            assert!(o.next_state < self.n_states, "next state out of range");
        }
        self.outcomes[state][action] = outcomes;
    }

    /// Largest absolute reward value anywhere in the model.
    pub fn max_abs_reward(&self) -> f64 {
        self.outcomes
            .iter()
            .flatten()
            .flatten()
            .flat_map(|o| o.rewards.iter())
            .map(|rp| rp.value.abs())
            .fold(0.0, f64::max)
    }

    /// Check every structural invariant; violations are data, not errors.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for s in 0..self.n_states {
            if self.terminal[s] {
                if self.outcomes[s].iter().any(|row| !row.is_empty()) {
                    violations.push(Violation::TerminalHasTransitions { state: s });
                }
                continue;
            }
            for a in 0..self.n_actions {
                let row = &self.outcomes[s][a];
                let mut sum = 0.0;
                for o in row {
                    if o.next_state >= self.n_states {
                        violations.push(Violation::InvalidNextState {
                            state: s,
                            action: a,
                            next_state: o.next_state,
                        });
                    }
                    if !o.prob.is_finite() || o.prob < 0.0 {
                        violations.push(Violation::NegativeTransitionProb {
                            state: s,
                            action: a,
                            next_state: o.next_state,
                            prob: o.prob,
                        });
                    }
                    sum += o.prob;
                    let mut rsum = 0.0;
                    for rp in &o.rewards {
                        if !rp.value.is_finite() {
                            violations.push(Violation::NonFiniteReward {
                                state: s,
                                action: a,
                                next_state: o.next_state,
                                value: rp.value,
                            });
                        }
                        if !rp.prob.is_finite() || rp.prob < 0.0 {
                            violations.push(Violation::NegativeRewardProb {
                                state: s,
                                action: a,
                                next_state: o.next_state,
                                prob: rp.prob,
                            });
                        }
                        rsum += rp.prob;
                    }
                    if (rsum - 1.0).abs() > PROB_TOLERANCE {
                        violations.push(Violation::RewardDistSum {
                            state: s,
                            action: a,
                            next_state: o.next_state,
                            sum: rsum,
                        });
                    }
                }
                if (sum - 1.0).abs() > PROB_TOLERANCE {
                    violations.push(Violation::TransitionRowSum {
                        state: s,
                        action: a,
                        sum,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json_str(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Per-state probability distribution over actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::PolicyWire", into = "wire::PolicyWire")]
pub struct Policy {
    n_actions: usize,
    /// `rows[s]` is a list of `(action, probability)` pairs.
    rows: Vec<Vec<(usize, f64)>>,
}

impl Policy {
    /// Uniform policy over all actions in every state.
    pub fn uniform(n_states: usize, n_actions: usize) -> Self {
        let p = 1.0 / n_actions as f64;
        Self {
            n_actions,
            rows: vec![(0..n_actions).map(|a| (a, p)).collect(); n_states],
        }
    }

    /// Deterministic policy taking `actions[s]` in state `s`.
    pub fn deterministic(n_actions: usize, actions: &[usize]) -> Self {
        Self {
            n_actions,
            rows: actions.iter().map(|&a| vec![(a, 1.0)]).collect(),
        }
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn action_probs(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }

    /// Check policy invariants against an MDP's shape. Rows for terminal
    /// states are ignored (they are never queried).
    pub fn validate(&self, mdp: &Mdp) -> ValidationReport {
        let mut violations = Vec::new();
        if self.rows.len() != mdp.n_states() {
            violations.push(Violation::PolicyStateCount {
                got: self.rows.len(),
                expected: mdp.n_states(),
            });
            return ValidationReport { violations };
        }
        for (s, row) in self.rows.iter().enumerate() {
            if mdp.is_terminal(s) {
                continue;
            }
            let mut sum = 0.0;
            for &(a, p) in row {
                if a >= mdp.n_actions() {
                    violations.push(Violation::PolicyInvalidAction { state: s, action: a });
                }
                if !p.is_finite() || p < 0.0 {
                    violations.push(Violation::PolicyNegativeProb {
                        state: s,
                        action: a,
                        prob: p,
                    });
                }
                sum += p;
            }
            if (sum - 1.0).abs() > PROB_TOLERANCE {
                violations.push(Violation::PolicyRowSum { state: s, sum });
            }
        }
        ValidationReport { violations }
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json_str(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// A single structural invariant violation, with its location.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TransitionRowSum { state: usize, action: usize, sum: f64 },
    NegativeTransitionProb { state: usize, action: usize, next_state: usize, prob: f64 },
    RewardDistSum { state: usize, action: usize, next_state: usize, sum: f64 },
    NegativeRewardProb { state: usize, action: usize, next_state: usize, prob: f64 },
    NonFiniteReward { state: usize, action: usize, next_state: usize, value: f64 },
    TerminalHasTransitions { state: usize },
    InvalidNextState { state: usize, action: usize, next_state: usize },
    PolicyStateCount { got: usize, expected: usize },
    PolicyRowSum { state: usize, sum: f64 },
    PolicyNegativeProb { state: usize, action: usize, prob: f64 },
    PolicyInvalidAction { state: usize, action: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::TransitionRowSum { state, action, sum } => {
                write!(f, "row sum {sum} at ({state},{action})")
            }
            Violation::NegativeTransitionProb { state, action, next_state, prob } => {
                write!(f, "negative transition probability {prob} at ({state},{action})->{next_state}")
            }
            Violation::RewardDistSum { state, action, next_state, sum } => {
                write!(f, "reward distribution sum {sum} at ({state},{action})->{next_state}")
            }
            Violation::NegativeRewardProb { state, action, next_state, prob } => {
                write!(f, "negative reward probability {prob} at ({state},{action})->{next_state}")
            }
            Violation::NonFiniteReward { state, action, next_state, value } => {
                write!(f, "non-finite reward {value} at ({state},{action})->{next_state}")
            }
            Violation::TerminalHasTransitions { state } => {
                write!(f, "terminal state {state} has transitions")
            }
            Violation::InvalidNextState { state, action, next_state } => {
                write!(f, "next state {next_state} out of range at ({state},{action})")
            }
            Violation::PolicyStateCount { got, expected } => {
                write!(f, "policy covers {got} states, MDP has {expected}")
            }
            Violation::PolicyRowSum { state, sum } => {
                write!(f, "policy row sum {sum} at state {state}")
            }
            Violation::PolicyNegativeProb { state, action, prob } => {
                write!(f, "negative policy probability {prob} at ({state},{action})")
            }
            Violation::PolicyInvalidAction { state, action } => {
                write!(f, "policy references invalid action {action} at state {state}")
            }
        }
    }
}

/// Outcome of a validation pass; empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One simulated transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
    pub terminal: bool,
}

/// A seeded rollout: consecutive steps chain, ending at a terminal state or
/// truncated at the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub seed: u64,
}

impl Trajectory {
    pub fn rewards(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.reward).collect()
    }
}

/// Sample one transition from `(state, action)`. Deterministic given the
/// RNG state; terminal states cannot be sampled from.
pub fn sample_step(
    mdp: &Mdp,
    state: usize,
    action: usize,
    rng: &mut RngState,
) -> Result<(f64, usize, bool)> {
    if state >= mdp.n_states() {
        return Err(Error::InvalidState {
            state,
            n_states: mdp.n_states(),
        });
    }
    if mdp.is_terminal(state) {
        return Err(Error::TerminalState { state });
    }
    if action >= mdp.n_actions() {
        return Err(Error::InvalidAction {
            state,
            action,
            n_actions: mdp.n_actions(),
        });
    }
    let outcomes = mdp.outcomes(state, action);
    if outcomes.is_empty() {
        return Err(Error::MissingOutcomes { state, action });
    }
    let oi = pick(outcomes.iter().map(|o| o.prob), rng);
    let outcome = &outcomes[oi];
    let ri = pick(outcome.rewards.iter().map(|rp| rp.prob), rng);
    let reward = outcome.rewards[ri].value;
    Ok((reward, outcome.next_state, mdp.is_terminal(outcome.next_state)))
}

/// Inverse-CDF draw over an iterator of probabilities.
fn pick(probs: impl Iterator<Item = f64> + Clone, rng: &mut RngState) -> usize {
    let mut u = rng.next_f64();
    let n = probs.clone().count();
    for (i, p) in probs.enumerate() {
        u -= p;
        if u < 0.0 {
            return i;
        }
    }
    n - 1
}

/// Follow `policy` from `start_state` until a terminal state or `horizon`
/// steps. A terminal start yields an empty trajectory.
pub fn rollout(
    mdp: &Mdp,
    policy: &Policy,
    start_state: usize,
    horizon: usize,
    rng: &mut RngState,
    seed: u64,
) -> Result<Trajectory> {
    let mut steps = Vec::new();
    let mut state = start_state;
    for _ in 0..horizon {
        if mdp.is_terminal(state) {
            break;
        }
        let action = sample_action(policy, state, rng);
        let (reward, next_state, terminal) = sample_step(mdp, state, action, rng)?;
        steps.push(Step {
            state,
            action,
            reward,
            next_state,
            terminal,
        });
        state = next_state;
    }
    Ok(Trajectory { steps, seed })
}

pub(crate) fn sample_action(policy: &Policy, state: usize, rng: &mut RngState) -> usize {
    let row = policy.action_probs(state);
    let i = pick(row.iter().map(|&(_, p)| p), rng);
    row[i].0
}

/// Steady-state distribution of the chain induced by `policy`, by power
/// iteration. Requires an MDP without terminal states; the caller asserts
/// ergodicity. The returned `d` satisfies `‖dPᵖ − d‖₁ < tol` exactly as
/// returned.
pub fn stationary_distribution(mdp: &Mdp, policy: &Policy, tol: f64) -> Result<Vec<f64>> {
    const MAX_ITERS: usize = 1_000_000;
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    if (0..mdp.n_states()).any(|s| mdp.is_terminal(s)) {
        return Err(Error::InvalidParameter(
            "stationary distribution requires an MDP without terminal states".into(),
        ));
    }
    let n = mdp.n_states();
    // Row-stochastic P^pi(s, s') = sum_a pi(a|s) p(s'|s,a).
    let mut p = vec![0.0; n * n];
    for s in 0..n {
        for &(a, pa) in policy.action_probs(s) {
            for o in mdp.outcomes(s, a) {
                p[s * n + o.next_state] += pa * o.prob;
            }
        }
    }
    let mut d = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        next.iter_mut().for_each(|x| *x = 0.0);
        for s in 0..n {
            let ds = d[s];
            if ds == 0.0 {
                continue;
            }
            for s2 in 0..n {
                next[s2] += ds * p[s * n + s2];
            }
        }
        residual = d
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        if residual < tol {
            return Ok(d);
        }
        std::mem::swap(&mut d, &mut next);
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERS,
        residual,
    })
}

mod wire {
    //! JSON schema:
    //! `{"n_states":N,"n_actions":A,"terminal":[...],"transitions":[{"s":i,"a":j,"out":[{"s2":k,"p":x,"rewards":[{"r":y,"p":z}]}]}]}`
    //! and the analogous policy form
    //! `{"n_states":N,"n_actions":A,"probs":[{"s":i,"actions":[{"a":j,"p":x}]}]}`.

    use serde::{Deserialize, Serialize};

    use super::{Mdp, Outcome, Policy};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct MdpWire {
        n_states: usize,
        n_actions: usize,
        terminal: Vec<bool>,
        transitions: Vec<TransitionRow>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct TransitionRow {
        s: usize,
        a: usize,
        out: Vec<Outcome>,
    }

    impl From<Mdp> for MdpWire {
        fn from(mdp: Mdp) -> Self {
            let mut transitions = Vec::new();
            for s in 0..mdp.n_states {
                for a in 0..mdp.n_actions {
                    if !mdp.outcomes[s][a].is_empty() {
                        transitions.push(TransitionRow {
                            s,
                            a,
                            out: mdp.outcomes[s][a].clone(),
                        });
                    }
                }
            }
            MdpWire {
                n_states: mdp.n_states,
                n_actions: mdp.n_actions,
                terminal: mdp.terminal,
                transitions,
            }
        }
    }

    impl TryFrom<MdpWire> for Mdp {
        type Error = String;

        fn try_from(w: MdpWire) -> Result<Self, String> {
            if w.n_states == 0 || w.n_actions == 0 {
                return Err("n_states and n_actions must be positive".into());
            }
            if w.terminal.len() != w.n_states {
                return Err(format!(
                    "terminal has {} entries, expected {}",
                    w.terminal.len(),
                    w.n_states
                ));
            }
            let mut mdp = Mdp::new(w.n_states, w.n_actions);
            mdp.terminal = w.terminal;
            for row in w.transitions {
                if row.s >= w.n_states {
                    return Err(format!("transition row state {} out of range", row.s));
                }
                if row.a >= w.n_actions {
                    return Err(format!("transition row action {} out of range", row.a));
                }
                for o in &row.out {
                    if o.next_state >= w.n_states {
                        return Err(format!(
                            "next state {} out of range at ({},{})",
                            o.next_state, row.s, row.a
                        ));
                    }
                }
                if !mdp.outcomes[row.s][row.a].is_empty() {
                    return Err(format!("duplicate transition row at ({},{})", row.s, row.a));
                }
                mdp.outcomes[row.s][row.a] = row.out;
            }
            Ok(mdp)
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct PolicyWire {
        n_states: usize,
        n_actions: usize,
        probs: Vec<PolicyRow>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct PolicyRow {
        s: usize,
        actions: Vec<ActionProb>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ActionProb {
        a: usize,
        p: f64,
    }

    impl From<Policy> for PolicyWire {
        fn from(policy: Policy) -> Self {
            PolicyWire {
                n_states: policy.rows.len(),
                n_actions: policy.n_actions,
                probs: policy
                    .rows
                    .iter()
                    .enumerate()
                    .map(|(s, row)| PolicyRow {
                        s,
                        actions: row.iter().map(|&(a, p)| ActionProb { a, p }).collect(),
                    })
                    .collect(),
            }
        }
    }

    impl TryFrom<PolicyWire> for Policy {
        type Error = String;

        fn try_from(w: PolicyWire) -> Result<Self, String> {
            let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); w.n_states];
            for row in w.probs {
                if row.s >= w.n_states {
                    return Err(format!("policy row state {} out of range", row.s));
                }
                if !rows[row.s].is_empty() {
                    return Err(format!("duplicate policy row at state {}", row.s));
                }
                rows[row.s] = row.actions.into_iter().map(|ap| (ap.a, ap.p)).collect();
            }
            Ok(Policy {
                n_actions: w.n_actions,
                rows,
            })
        }
    }
}
