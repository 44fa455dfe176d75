//! Small MDP constructors used by tests, experiments, and the CLI examples.
//!
//! Everything produced here passes [`Mdp::validate`].

use super::{Mdp, Outcome, RewardPoint};
use crate::rng::RngState;

/// Deterministic chain with one action: state `i` moves to `i + 1` earning
/// `rewards[i]`; the final state is terminal.
pub fn deterministic_chain(rewards: &[f64]) -> Mdp {
    let n = rewards.len() + 1;
    let mut mdp = Mdp::new(n, 1);
    mdp.set_terminal(n - 1, true);
    for (i, &r) in rewards.iter().enumerate() {
        mdp.set_outcomes(i, 0, vec![Outcome::new(i + 1, 1.0, r)]);
    }
    mdp
}

/// Chain whose only non-zero reward arrives on the final transition, after
/// `delay` zero-reward steps: states `0..=delay` then a terminal state.
pub fn sparse_reward_chain(delay: usize, reward: f64) -> Mdp {
    let mut rewards = vec![0.0; delay + 1];
    rewards[delay] = reward;
    deterministic_chain(&rewards)
}

/// Single state looping onto itself with reward 1.
pub fn unit_self_loop() -> Mdp {
    let mut mdp = Mdp::new(1, 1);
    mdp.set_outcomes(0, 0, vec![Outcome::new(0, 1.0, 1.0)]);
    mdp
}

/// Random MDP with no terminal states. Every `(s, a)` keeps probability mass
/// on a ring edge and a self-loop so the induced chain is irreducible and
/// aperiodic under any policy with full support.
pub fn random_ergodic(n_states: usize, n_actions: usize, rng: &mut RngState) -> Mdp {
    assert!(n_states >= 1);
    let mut mdp = Mdp::new(n_states, n_actions);
    for s in 0..n_states {
        for a in 0..n_actions {
            let mut weights = vec![0.0; n_states];
            weights[s] += 0.05;
            weights[(s + 1) % n_states] += 0.1;
            for _ in 0..3.min(n_states) {
                weights[rng.below(n_states)] += rng.uniform(0.1, 1.0);
            }
            let total: f64 = weights.iter().sum();
            let outcomes = weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(s2, &w)| Outcome::with_rewards(s2, w / total, random_rewards(rng)))
                .collect();
            mdp.set_outcomes(s, a, outcomes);
        }
    }
    mdp
}

/// Random episodic MDP: `n_states` working states plus one terminal state at
/// index `n_states`. Each `(s, a)` terminates with probability in
/// [0.25, 0.4] and otherwise moves between working states.
pub fn random_episodic(n_states: usize, n_actions: usize, rng: &mut RngState) -> Mdp {
    assert!(n_states >= 1);
    let terminal = n_states;
    let mut mdp = Mdp::new(n_states + 1, n_actions);
    mdp.set_terminal(terminal, true);
    for s in 0..n_states {
        for a in 0..n_actions {
            let p_term = rng.uniform(0.25, 0.4);
            let mut weights = vec![0.0; n_states];
            for _ in 0..2.min(n_states) {
                weights[rng.below(n_states)] += rng.uniform(0.2, 1.0);
            }
            let total: f64 = weights.iter().sum();
            let mut outcomes = vec![Outcome::with_rewards(
                terminal,
                p_term,
                random_rewards(rng),
            )];
            outcomes.extend(
                weights
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(s2, &w)| {
                        Outcome::with_rewards(s2, (1.0 - p_term) * w / total, random_rewards(rng))
                    }),
            );
            mdp.set_outcomes(s, a, outcomes);
        }
    }
    mdp
}

/// Two-atom reward distribution with values in [-0.5, 1.0].
fn random_rewards(rng: &mut RngState) -> Vec<RewardPoint> {
    let p = rng.uniform(0.2, 0.8);
    vec![
        RewardPoint {
            value: rng.uniform(-0.5, 1.0),
            prob: p,
        },
        RewardPoint {
            value: rng.uniform(-0.5, 1.0),
            prob: 1.0 - p,
        },
    ]
}

/// Two-action risk example. From the decision state 0, action 0 moves
/// deterministically to state 1 and action 1 reaches state 2 with probability
/// `p`, terminating otherwise. All immediate rewards are zero. States 1 and 2
/// self-loop so their values can be injected rather than solved.
///
/// State layout: 0 = decision, 1 = sure successor, 2 = risky successor,
/// 3 = terminal.
pub fn two_action_gap_mdp(p: f64) -> Mdp {
    assert!(p > 0.0 && p <= 1.0);
    let mut mdp = Mdp::new(4, 2);
    mdp.set_terminal(3, true);
    mdp.set_outcomes(0, 0, vec![Outcome::new(1, 1.0, 0.0)]);
    let risky = if p < 1.0 {
        vec![Outcome::new(2, p, 0.0), Outcome::new(3, 1.0 - p, 0.0)]
    } else {
        vec![Outcome::new(2, 1.0, 0.0)]
    };
    mdp.set_outcomes(0, 1, risky);
    for s in [1, 2] {
        for a in [0, 1] {
            mdp.set_outcomes(s, a, vec![Outcome::new(s, 1.0, 0.0)]);
        }
    }
    mdp
}

/// Value vector that injects the successor values of the risk example
/// directly: v(sure) = 1, v(risky) = 2/p, others 0.
pub fn two_action_gap_values(p: f64) -> Vec<f64> {
    vec![0.0, 1.0, 2.0 / p, 0.0]
}

/// Risk example embedded in an explicit episodic MDP whose fixed point under
/// value-discount targets realizes v(sure) = 1 and v(risky) = 2/p: each
/// successor earns its value as a single reward and terminates.
///
/// State layout: 0 = decision, 1 = sure, 2 = risky, 3 = terminal after the
/// risky branch dies, 4 = terminal after a successor pays out.
pub fn two_action_gap_embedded(p: f64) -> Mdp {
    assert!(p > 0.0 && p <= 1.0);
    let mut mdp = Mdp::new(5, 2);
    mdp.set_terminal(3, true);
    mdp.set_terminal(4, true);
    mdp.set_outcomes(0, 0, vec![Outcome::new(1, 1.0, 0.0)]);
    let risky = if p < 1.0 {
        vec![Outcome::new(2, p, 0.0), Outcome::new(3, 1.0 - p, 0.0)]
    } else {
        vec![Outcome::new(2, 1.0, 0.0)]
    };
    mdp.set_outcomes(0, 1, risky);
    for a in [0, 1] {
        mdp.set_outcomes(1, a, vec![Outcome::new(4, 1.0, 1.0)]);
        mdp.set_outcomes(2, a, vec![Outcome::new(4, 1.0, 2.0 / p)]);
    }
    mdp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_mdps_validate() {
        for seed in 0..20 {
            let mut rng = RngState::from_seed(seed);
            assert!(random_ergodic(6, 3, &mut rng).validate().is_valid());
            assert!(random_episodic(5, 2, &mut rng).validate().is_valid());
        }
        assert!(deterministic_chain(&[1.0, -2.0, 0.5]).validate().is_valid());
        assert!(sparse_reward_chain(3, 2.0).validate().is_valid());
        assert!(unit_self_loop().validate().is_valid());
        for p in [0.05, 0.5, 1.0] {
            assert!(two_action_gap_mdp(p).validate().is_valid());
            assert!(two_action_gap_embedded(p).validate().is_valid());
        }
    }

    #[test]
    fn sparse_chain_shape() {
        let mdp = sparse_reward_chain(3, 2.0);
        assert_eq!(mdp.n_states(), 5);
        assert!(mdp.is_terminal(4));
        assert_eq!(mdp.outcomes(3, 0)[0].rewards[0].value, 2.0);
        assert_eq!(mdp.outcomes(0, 0)[0].rewards[0].value, 0.0);
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let mut a = RngState::from_seed(17);
        let mut b = RngState::from_seed(17);
        assert_eq!(random_episodic(5, 2, &mut a), random_episodic(5, 2, &mut b));
    }
}
