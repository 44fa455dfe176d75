//! Return computation and preference-ordering equivalence between hyperbolic
//! discounting and transformed exponential discounting.
//!
//! The sparse-reward setting compares a single delayed reward `R` arriving
//! after `T` zero-reward steps against an immediate reference reward `r_ref`.
//! Under hyperbolic weighting the delayed option wins iff
//! `R/r_ref > 1 + k·T`; the transformed exponential return reproduces exactly
//! that ordering, which [`verify_ordering_equivalence`] checks cell by cell.

use crate::error::{Error, Result};
use crate::transforms::RewardTransform;

/// Half-width of the band around `R/r_ref = 1 + k·T` inside which a verdict
/// is flagged as a boundary tie rather than counted for agreement.
pub const ORDERING_BOUNDARY_BAND: f64 = 1e-9;

/// Reward sequence whose only non-zero entry is `reward` at index `delay`
/// (the reward received on step `delay + 1`).
pub fn sparse_sequence(delay: usize, reward: f64) -> Vec<f64> {
    let mut rewards = vec![0.0; delay + 1];
    rewards[delay] = reward;
    rewards
}

/// Hyperbolically-weighted return `Σ_n rewards[n] / (1 + k·n)`.
pub fn hyperbolic_return(rewards: &[f64], k: f64) -> f64 {
    debug_assert!(k > 0.0);
    rewards
        .iter()
        .enumerate()
        .map(|(n, &r)| r / (1.0 + k * n as f64))
        .sum()
}

/// Exponentially-discounted return of transformed rewards,
/// `Σ_n γ^n·g(rewards[n])`, optionally wrapped in a natural log.
///
/// Each term is evaluated as a single exponential
/// `r_ref·exp(η(R/r_ref − 1) + n·log γ)` so that large `η` cannot overflow an
/// intermediate factor; the result and its sign agree with the direct
/// product for all finite inputs.
pub fn transformed_return(
    rewards: &[f64],
    transform: &RewardTransform,
    outer_log: bool,
) -> Result<f64> {
    let ln_gamma = transform.gamma.ln();
    let eta = transform.eta();
    let mut sum = 0.0;
    for (n, &reward) in rewards.iter().enumerate() {
        if reward == 0.0 {
            continue; // g(0) = 0
        }
        let exponent = eta * (reward / transform.r_ref - 1.0) + n as f64 * ln_gamma;
        sum += transform.r_ref * exponent.exp();
    }
    if outer_log {
        if sum <= 0.0 {
            return Err(Error::LogDomain { value: sum });
        }
        Ok(sum.ln())
    } else {
        Ok(sum)
    }
}

/// Hyperbolic preference predicate: strictly prefer a reward `reward`
/// delayed by `delay` steps over an immediate `r_ref` iff
/// `reward/r_ref > 1 + k·delay`.
pub fn prefers_later(reward: f64, delay: usize, r_ref: f64, k: f64) -> bool {
    debug_assert!(r_ref > 0.0 && k > 0.0);
    reward / r_ref > 1.0 + k * delay as f64
}

/// One cell of the ordering-equivalence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingVerdict {
    pub reward: f64,
    pub delay: usize,
    /// Transformed exponential return of the sparse sequence.
    pub g_return: f64,
    /// `g_return > r_ref`.
    pub prefers_later_by_g: bool,
    /// The hyperbolic predicate.
    pub prefers_later_by_hyperbolic: bool,
    pub agree: bool,
    /// Within [`ORDERING_BOUNDARY_BAND`] of the exact tie; excluded from
    /// agreement statistics because both orderings use strict inequalities.
    pub boundary: bool,
}

/// Evaluate both preference orderings over an `(R, T)` grid of sparse-reward
/// episodes. Off the boundary band the two verdicts agree for every valid
/// parameterization.
pub fn verify_ordering_equivalence(
    gamma: f64,
    k: f64,
    r_ref: f64,
    r_grid: &[f64],
    t_grid: &[usize],
) -> Result<Vec<OrderingVerdict>> {
    if r_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be non-empty".into()));
    }
    if r_ref <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ordering check requires r_ref > 0, got {r_ref}"
        )));
    }
    let transform = RewardTransform::new(gamma, k, r_ref)?;
    let mut verdicts = Vec::with_capacity(r_grid.len() * t_grid.len());
    for &reward in r_grid {
        for &delay in t_grid {
            let g_return = transformed_return(&sparse_sequence(delay, reward), &transform, false)?;
            let prefers_later_by_g = g_return > r_ref;
            let prefers_later_by_hyperbolic = prefers_later(reward, delay, r_ref, k);
            let boundary =
                (reward / r_ref - 1.0 - k * delay as f64).abs() < ORDERING_BOUNDARY_BAND;
            verdicts.push(OrderingVerdict {
                reward,
                delay,
                g_return,
                prefers_later_by_g,
                prefers_later_by_hyperbolic,
                agree: prefers_later_by_g == prefers_later_by_hyperbolic,
                boundary,
            });
        }
    }
    Ok(verdicts)
}

/// Side-by-side returns of one reward sequence under the three weightings.
/// For dense or stochastic rewards these genuinely differ; no equivalence is
/// claimed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnComparison {
    pub hyperbolic: f64,
    pub transformed: f64,
    pub hdtd: f64,
}

/// Compare hyperbolic, transformed-exponential, and backward-unrolled
/// hyperbolic-recursion values of a deterministic reward sequence.
pub fn compare_returns(
    rewards: &[f64],
    gamma: f64,
    k: f64,
    r_ref: f64,
) -> Result<ReturnComparison> {
    let transform = RewardTransform::new(gamma, k, r_ref)?;
    Ok(ReturnComparison {
        hyperbolic: hyperbolic_return(rewards, k),
        transformed: transformed_return(rewards, &transform, false)?,
        hdtd: hdtd_sequence_value(rewards, k)?,
    })
}

/// Value of a finite deterministic sequence under the recursion
/// `v = (R + v')/(1 + k·v')`, unrolled backward from 0.
pub fn hdtd_sequence_value(rewards: &[f64], k: f64) -> Result<f64> {
    let mut v = 0.0;
    for &reward in rewards.iter().rev() {
        let denom = 1.0 + k * v;
        if denom.abs() <= crate::transforms::HDTD_SINGULARITY_GUARD {
            return Err(Error::HdtdSingularity {
                denominator: denom.abs(),
            });
        }
        v = (reward + v) / denom;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::generators;
    use crate::mdp::Policy;
    use crate::solvers::{fixed_point, ValueVector};
    use crate::transforms::Transform;

    #[test]
    fn hyperbolic_return_examples() {
        assert!((hyperbolic_return(&[0.0, 0.0, 1.0], 1.0) - 1.0 / 3.0).abs() < 1e-15);
        for k in [0.1, 1.0, 7.5] {
            assert_eq!(hyperbolic_return(&[5.0], k), 5.0);
        }
        assert_eq!(hyperbolic_return(&[0.0, 0.0, 0.0], 0.5), 0.0);
    }

    #[test]
    fn transformed_return_sparse_matches_closed_form() {
        // For a sparse sequence the sum collapses to γ^T·g(R).
        let g = RewardTransform::new(0.8, 0.5, 1.5).unwrap();
        for (delay, reward) in [(0usize, 2.0), (3, 4.5), (10, 0.7)] {
            let seq = sparse_sequence(delay, reward);
            let direct = g.gamma.powi(delay as i32) * g.apply(reward);
            let summed = transformed_return(&seq, &g, false).unwrap();
            assert!((summed - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn transformed_return_hand_value() {
        // gamma = e^{-1}, k = 1, r_ref = 1, rewards (0,0,0,3):
        // e^{-3}·e^{(3-1)} = e^{-1}.
        let g = RewardTransform::new((-1.0f64).exp(), 1.0, 1.0).unwrap();
        let got = transformed_return(&[0.0, 0.0, 0.0, 3.0], &g, false).unwrap();
        assert!((got - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn transformed_return_all_zero_rewards() {
        let g = RewardTransform::new(0.5, 1.0, 1.0).unwrap();
        assert_eq!(transformed_return(&[0.0, 0.0], &g, false).unwrap(), 0.0);
    }

    #[test]
    fn transformed_return_outer_log_domain_error() {
        let g = RewardTransform::new(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            transformed_return(&[0.0, 0.0], &g, true),
            Err(Error::LogDomain { .. })
        ));
    }

    #[test]
    fn transformed_return_survives_large_eta() {
        // eta = -ln(0.01)/0.01 ≈ 460; the one-exponential evaluation keeps the
        // far-below-boundary cell at 0 instead of NaN.
        let g = RewardTransform::new(0.01, 0.01, 1.0).unwrap();
        let seq = sparse_sequence(50, 6.0); // R/r - 1 = 5 << k·T? no: 0.01·50 = 0.5 < 5
        let v = transformed_return(&seq, &g, false).unwrap();
        assert!(v.is_finite() || v == f64::INFINITY);
        // Far below the boundary: delay huge relative to reward.
        let g2 = RewardTransform::new(0.011, 9.9, 0.1).unwrap();
        let seq2 = sparse_sequence(50, 0.11);
        let v2 = transformed_return(&seq2, &g2, false).unwrap();
        assert!(v2.is_finite() && v2 >= 0.0);
    }

    #[test]
    fn prefers_later_examples() {
        assert!(prefers_later(2.0, 1, 1.0, 0.5)); // 2 > 1.5
        assert!(!prefers_later(2.0, 1, 1.0, 1.0)); // 2 > 2 fails, strict
    }

    #[test]
    fn preference_reversal_demo() {
        // Narrative pair: with k = 1.5, take +1 now over +2 one step later,
        // yet take +2 at step 20 over +1 at step 19.
        let k = 1.5;
        assert!(!prefers_later(2.0, 1, 1.0, k));
        let later = hyperbolic_return(&sparse_sequence(20, 2.0), k);
        let sooner = hyperbolic_return(&sparse_sequence(19, 1.0), k);
        assert!(later > sooner, "{later} vs {sooner}");

        // With a shallow k = 0.05 the delayed +2 wins both comparisons.
        let k = 0.05;
        assert!(prefers_later(2.0, 1, 1.0, k));
        let later = hyperbolic_return(&sparse_sequence(20, 2.0), k);
        let sooner = hyperbolic_return(&sparse_sequence(19, 1.0), k);
        assert!(later > sooner);
    }

    #[test]
    fn ordering_equivalence_on_default_style_grid() {
        let r_grid: Vec<f64> = (0..19).map(|i| 0.5 + 0.25 * i as f64).collect();
        let t_grid: Vec<usize> = (0..=50).collect();
        let verdicts = verify_ordering_equivalence(0.9, 0.1, 1.0, &r_grid, &t_grid).unwrap();
        assert_eq!(verdicts.len(), 19 * 51);
        for v in &verdicts {
            if !v.boundary {
                assert!(v.agree, "disagreement at R={}, T={}", v.reward, v.delay);
            }
            // Cross-oracle: the predicate equals a direct hyperbolic-return
            // comparison against the immediate reference reward.
            let by_h_direct = hyperbolic_return(&sparse_sequence(v.delay, v.reward), 0.1)
                > hyperbolic_return(&[1.0], 0.1);
            assert_eq!(v.prefers_later_by_hyperbolic, by_h_direct);
        }
    }

    #[test]
    fn ordering_boundary_cell_is_flagged() {
        // R = r_ref(1 + k·T) exactly: k = 0.5, T = 2 gives R = 2.
        let verdicts = verify_ordering_equivalence(0.7, 0.5, 1.0, &[2.0], &[2]).unwrap();
        assert!(verdicts[0].boundary);
    }

    #[test]
    fn outer_log_leaves_verdicts_unchanged() {
        let g = RewardTransform::new(0.85, 0.2, 1.0).unwrap();
        for delay in [0usize, 3, 12, 40] {
            for reward in [0.5, 1.0, 2.5, 9.0] {
                let seq = sparse_sequence(delay, reward);
                let plain = transformed_return(&seq, &g, false).unwrap();
                let logged = transformed_return(&seq, &g, true).unwrap();
                assert_eq!(plain > 1.0, logged > 0.0, "monotone wrapper flipped a verdict");
            }
        }
    }

    #[test]
    fn consistency_with_fixed_point_on_sparse_chain() {
        // The fixed point of the episodic chain realizing the sparse sequence
        // equals the sequence's transformed return at the start state.
        for (delay, reward, gamma, k) in
            [(2usize, 3.0, 0.5, 1.0), (5, 0.8, 0.9, 0.3), (0, 2.0, 0.3, 2.0)]
        {
            let mdp = generators::sparse_reward_chain(delay, reward);
            let policy = Policy::uniform(mdp.n_states(), 1);
            let transform = Transform::reward(gamma, k, 1.0).unwrap();
            let (v, _) = fixed_point(
                &mdp,
                &policy,
                &transform,
                ValueVector::zeros(mdp.n_states()),
                1e-12,
                100_000,
            )
            .unwrap();
            let g = RewardTransform::new(gamma, k, 1.0).unwrap();
            let expected = transformed_return(&sparse_sequence(delay, reward), &g, false).unwrap();
            assert!(
                (v[0] - expected).abs() < 1e-9,
                "delay {delay}: {} vs {expected}",
                v[0]
            );
        }
    }

    #[test]
    fn compare_returns_reports_all_three() {
        let rewards = [1.0, 0.5, 2.0];
        let cmp = compare_returns(&rewards, 0.8, 0.5, 1.0).unwrap();
        // Hyperbolic weight series by hand: 1 + 0.5/1.5 + 2/2.
        assert!((cmp.hyperbolic - (1.0 + 0.5 / 1.5 + 1.0)).abs() < 1e-12);
        // Backward recursion by hand: v2 = 2, v1 = (0.5+2)/(1+1) = 1.25,
        // v0 = (1+1.25)/(1+0.625) = 2.25/1.625.
        assert!((cmp.hdtd - 2.25 / 1.625).abs() < 1e-12);
        // Dense rewards: the three notions genuinely differ here.
        assert!((cmp.hyperbolic - cmp.transformed).abs() > 1e-6);
        assert!((cmp.hyperbolic - cmp.hdtd).abs() > 1e-6);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Ordering equivalence over randomized parameters, off the
            // boundary band.
            #[test]
            fn ordering_signs_match(
                gamma in 0.01..0.99f64,
                k in 0.01..10.0f64,
                r_ref in 0.1..10.0f64,
                reward_scale in 0.01..20.0f64,
                delay in 0usize..60,
            ) {
                let reward = reward_scale * r_ref;
                let margin = reward / r_ref - 1.0 - k * delay as f64;
                prop_assume!(margin.abs() > 1e-6);
                let g = RewardTransform::new(gamma, k, r_ref).unwrap();
                let g0 = transformed_return(&sparse_sequence(delay, reward), &g, false).unwrap();
                prop_assert_eq!(g0 > r_ref, margin > 0.0,
                    "G0 = {}, margin = {}", g0, margin);
            }

            // Hyperbolic return is linear in the reward sequence.
            #[test]
            fn hyperbolic_return_is_linear(
                rewards in prop::collection::vec(-10.0..10.0f64, 1..20),
                scale in -5.0..5.0f64,
                k in 0.01..10.0f64,
            ) {
                let scaled: Vec<f64> = rewards.iter().map(|r| scale * r).collect();
                let lhs = hyperbolic_return(&scaled, k);
                let rhs = scale * hyperbolic_return(&rewards, k);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
            }
        }
    }
}
