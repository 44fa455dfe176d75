//! One-step target transforms for generalized Bellman backups.
//!
//! A transform turns a sampled `(reward, next-state value)` pair into a
//! bootstrap target `f(r, v)`. The families implemented here:
//!
//! * `Linear` — `r + γ·v`, the classical target.
//! * `Reward` — `g(r) + γ·v` with the hyperbolic-equivalent reward transform
//!   `g(R) = r_ref·e^{η(R/r_ref − 1)}`, `η = −log(γ)/k`.
//! * `Discount` — `r + g_γ(v)` with a non-linear discount applied to the
//!   bootstrap value (linear `κγv` or power `κ·sign(v)((|v|+1)^γ − 1)`).
//! * `SquashTarget` — `h(r + γ·h⁻¹(v))`, values tracked on a squashed scale.
//! * `Hdtd` — `(r + v)/(1 + k·v)`, a hyperbolic recursion with a pole at
//!   `v = −1/k`. No contraction certificate exists for this family; solvers
//!   rely on residual stopping rules and a divergence detector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluating an Hdtd target with `|1 + k·v|` at or below this guard is an
/// error rather than a huge finite number.
pub const HDTD_SINGULARITY_GUARD: f64 = 1e-9;

/// Default slope of the linear tail of the squash function. Any positive
/// value keeps the inverse globally Lipschitz.
pub const DEFAULT_SQUASH_EPS: f64 = 1e-2;

/// Hyperbolic-equivalent reward transform `g(R) = r_ref·e^{η(R/r_ref − 1)}`.
///
/// `g(0)` is pinned to exactly 0: a zero reward must contribute nothing to a
/// transformed return, while the exponential form alone would give
/// `g(0) = r_ref·e^{−η} ≠ 0`. The exponential branch therefore applies only
/// to non-zero rewards. Ordering results for sparse rewards rely on this
/// piecewise definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardTransform {
    pub gamma: f64,
    pub k: f64,
    pub r_ref: f64,
}

impl RewardTransform {
    pub fn new(gamma: f64, k: f64, r_ref: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "reward transform requires gamma in (0,1), got {gamma}"
            )));
        }
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "reward transform requires k > 0, got {k}"
            )));
        }
        if r_ref == 0.0 || !r_ref.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reward transform requires a non-zero finite r_ref, got {r_ref}"
            )));
        }
        Ok(Self { gamma, k, r_ref })
    }

    /// `η = −log(γ)/k`, positive for γ ∈ (0,1) and k > 0.
    pub fn eta(&self) -> f64 {
        -self.gamma.ln() / self.k
    }

    /// Evaluate `g(R)`; see the type docs for the pinned `g(0) = 0`.
    pub fn apply(&self, reward: f64) -> f64 {
        if reward == 0.0 {
            0.0
        } else {
            self.r_ref * (self.eta() * (reward / self.r_ref - 1.0)).exp()
        }
    }
}

/// Discount family selector, for sweeps that vary parameters within one
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscountFamily {
    Linear,
    Power,
}

/// A discount function `g_γ` applied to the bootstrap value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscountFunction {
    /// `g_γ(v) = κ·γ·v` (κ = 1 gives the plain `γv` case).
    Linear { gamma: f64, kappa: f64 },
    /// Power discounting `g_γ(v) = κ·sign(v)((|v|+1)^γ − 1)`: odd, identity
    /// at γ = 1 (with κ = 1), zero at γ = 0, and derivative at most κ.
    Power { gamma: f64, kappa: f64 },
}

impl DiscountFunction {
    pub fn new(family: DiscountFamily, gamma: f64, kappa: f64) -> Result<Self> {
        match family {
            DiscountFamily::Linear => Self::linear(gamma, kappa),
            DiscountFamily::Power => Self::power(gamma, kappa),
        }
    }

    pub fn linear(gamma: f64, kappa: f64) -> Result<Self> {
        check_discount_params(gamma, kappa)?;
        Ok(Self::Linear { gamma, kappa })
    }

    pub fn power(gamma: f64, kappa: f64) -> Result<Self> {
        check_discount_params(gamma, kappa)?;
        Ok(Self::Power { gamma, kappa })
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            Self::Linear { gamma, .. } | Self::Power { gamma, .. } => gamma,
        }
    }

    pub fn kappa(&self) -> f64 {
        match *self {
            Self::Linear { kappa, .. } | Self::Power { kappa, .. } => kappa,
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        match *self {
            Self::Linear { gamma, kappa } => kappa * gamma * v,
            Self::Power { gamma, kappa } => {
                if gamma == 1.0 {
                    // (|v|+1) - 1 costs a mantissa bit; the identity must be exact.
                    kappa * v
                } else {
                    kappa * v.signum() * ((v.abs() + 1.0).powf(gamma) - 1.0)
                }
            }
        }
    }

    /// Closed-form derivative of [`Self::apply`]: `κγ` for the linear family,
    /// `κγ/(|v|+1)^{1−γ}` for power discounting. Maximal at the origin and
    /// never above [`Self::lipschitz`].
    pub fn derivative(&self, v: f64) -> f64 {
        match *self {
            Self::Linear { gamma, kappa } => kappa * gamma,
            Self::Power { gamma, kappa } => kappa * gamma / (v.abs() + 1.0).powf(1.0 - gamma),
        }
    }

    /// Supremum of the derivative: the contraction factor of the resulting
    /// operator.
    pub fn lipschitz(&self) -> f64 {
        match *self {
            Self::Linear { gamma, kappa } => kappa * gamma,
            Self::Power { kappa, .. } => kappa,
        }
    }

    /// `false` when the factor is exactly 1 (nonexpansion only).
    pub fn is_strict_contraction(&self) -> bool {
        self.lipschitz() < 1.0
    }
}

fn check_discount_params(gamma: f64, kappa: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "discount requires gamma in [0,1], got {gamma}"
        )));
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "discount requires kappa in (0,1], got {kappa}"
        )));
    }
    Ok(())
}

/// Invertible squashing pair `h`, `h⁻¹` with
/// `h(x) = sign(x)(√(|x|+1) − 1) + ε·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squash {
    pub eps: f64,
}

impl Squash {
    pub fn new(eps: f64) -> Result<Self> {
        if eps < 0.0 || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squash eps must be finite and >= 0, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    pub fn squash(&self, x: f64) -> f64 {
        x.signum() * ((x.abs() + 1.0).sqrt() - 1.0) + self.eps * x
    }

    /// Exact closed-form inverse of [`Self::squash`].
    pub fn unsquash(&self, y: f64) -> f64 {
        let a = y.abs();
        // Conjugate form of the quadratic root, stable for all eps >= 0 and
        // equal to (a+1)^2 - 1 at eps = 0.
        let b = a + 1.0 + self.eps;
        let u = 2.0 * b / (1.0 + (1.0 + 4.0 * self.eps * b).sqrt());
        let mag = u * u - 1.0;
        if y < 0.0 {
            -mag
        } else {
            mag
        }
    }

    /// Supremum of `|h'|`, attained at the origin.
    pub fn max_slope(&self) -> f64 {
        0.5 + self.eps
    }

    /// Supremum of `|(h⁻¹)'| = 1/inf|h'|`; infinite when ε = 0.
    pub fn max_inverse_slope(&self) -> f64 {
        if self.eps == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.eps
        }
    }
}

/// A complete one-step target specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransformWire", into = "TransformWire")]
pub enum Transform {
    Linear { gamma: f64 },
    Reward(RewardTransform),
    Discount(DiscountFunction),
    SquashTarget { gamma: f64, squash: Squash },
    Hdtd { k: f64 },
}

impl Transform {
    pub fn linear(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "linear target requires gamma in [0,1], got {gamma}"
            )));
        }
        Ok(Self::Linear { gamma })
    }

    pub fn reward(gamma: f64, k: f64, r_ref: f64) -> Result<Self> {
        Ok(Self::Reward(RewardTransform::new(gamma, k, r_ref)?))
    }

    pub fn power_discount(gamma: f64, kappa: f64) -> Result<Self> {
        Ok(Self::Discount(DiscountFunction::power(gamma, kappa)?))
    }

    pub fn linear_discount(gamma: f64, kappa: f64) -> Result<Self> {
        Ok(Self::Discount(DiscountFunction::linear(gamma, kappa)?))
    }

    pub fn squash_target(gamma: f64, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "squash target requires gamma in [0,1], got {gamma}"
            )));
        }
        Ok(Self::SquashTarget {
            gamma,
            squash: Squash::new(eps)?,
        })
    }

    pub fn hdtd(k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hdtd requires k > 0, got {k}"
            )));
        }
        Ok(Self::Hdtd { k })
    }

    /// Evaluate the bootstrap target `f(r, v)`.
    pub fn target(&self, r: f64, v: f64) -> Result<f64> {
        Ok(match self {
            Self::Linear { gamma } => r + gamma * v,
            Self::Reward(g) => g.apply(r) + g.gamma * v,
            Self::Discount(d) => r + d.apply(v),
            Self::SquashTarget { gamma, squash } => {
                squash.squash(r + gamma * squash.unsquash(v))
            }
            Self::Hdtd { k } => {
                let denom = 1.0 + k * v;
                if denom.abs() <= HDTD_SINGULARITY_GUARD {
                    return Err(Error::HdtdSingularity {
                        denominator: denom.abs(),
                    });
                }
                (r + v) / denom
            }
        })
    }

    /// Analytic bound on `|∂f/∂v|`, or `None` for Hdtd where no bound is
    /// known. A bound < 1 certifies a sup-norm contraction of the induced
    /// operator; exactly 1 certifies nonexpansion only.
    pub fn lipschitz_bound(&self) -> Option<f64> {
        match self {
            Self::Linear { gamma } => Some(*gamma),
            Self::Reward(g) => Some(g.gamma),
            Self::Discount(d) => Some(d.lipschitz()),
            Self::SquashTarget { gamma, squash } => {
                Some(squash.max_slope() * gamma * squash.max_inverse_slope())
            }
            Self::Hdtd { .. } => None,
        }
    }

    /// Discount parameter when the family has one.
    pub fn gamma(&self) -> Option<f64> {
        match self {
            Self::Linear { gamma } => Some(*gamma),
            Self::Reward(g) => Some(g.gamma),
            Self::Discount(d) => Some(d.gamma()),
            Self::SquashTarget { gamma, .. } => Some(*gamma),
            Self::Hdtd { .. } => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Reward(_) => "reward",
            Self::Discount(DiscountFunction::Linear { .. }) => "linear_discount",
            Self::Discount(DiscountFunction::Power { .. }) => "power",
            Self::SquashTarget { .. } => "squash",
            Self::Hdtd { .. } => "hdtd",
        }
    }
}

/// Flat JSON form, e.g. `{"kind":"power","gamma":0.5,"kappa":1.0}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformWire {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_ref: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    squash_eps: Option<f64>,
}

impl From<Transform> for TransformWire {
    fn from(t: Transform) -> Self {
        let mut w = TransformWire {
            kind: t.kind_name().to_string(),
            gamma: None,
            k: None,
            r_ref: None,
            kappa: None,
            squash_eps: None,
        };
        match t {
            Transform::Linear { gamma } => w.gamma = Some(gamma),
            Transform::Reward(g) => {
                w.gamma = Some(g.gamma);
                w.k = Some(g.k);
                w.r_ref = Some(g.r_ref);
            }
            Transform::Discount(d) => {
                w.gamma = Some(d.gamma());
                w.kappa = Some(d.kappa());
            }
            Transform::SquashTarget { gamma, squash } => {
                w.gamma = Some(gamma);
                w.squash_eps = Some(squash.eps);
            }
            Transform::Hdtd { k } => w.k = Some(k),
        }
        w
    }
}

impl TryFrom<TransformWire> for Transform {
    type Error = String;

    fn try_from(w: TransformWire) -> std::result::Result<Self, String> {
        let need = |field: Option<f64>, name: &str| {
            field.ok_or_else(|| format!("transform kind '{}' requires field '{name}'", w.kind))
        };
        let kappa = w.kappa.unwrap_or(1.0);
        let result = match w.kind.as_str() {
            "linear" => Transform::linear(need(w.gamma, "gamma")?),
            "reward" => Transform::reward(
                need(w.gamma, "gamma")?,
                need(w.k, "k")?,
                w.r_ref.unwrap_or(1.0),
            ),
            "linear_discount" => Transform::linear_discount(need(w.gamma, "gamma")?, kappa),
            "power" => Transform::power_discount(need(w.gamma, "gamma")?, kappa),
            "squash" => Transform::squash_target(
                need(w.gamma, "gamma")?,
                w.squash_eps.unwrap_or(DEFAULT_SQUASH_EPS),
            ),
            "hdtd" => Transform::hdtd(need(w.k, "k")?),
            other => return Err(format!(
                "unknown transform kind '{other}' (expected linear, reward, linear_discount, power, squash, or hdtd)"
            )),
        };
        result.map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_target() {
        let t = Transform::linear(0.9).unwrap();
        assert_eq!(t.target(1.0, 10.0).unwrap(), 10.0);
    }

    #[test]
    fn hdtd_target_at_zero_value() {
        let t = Transform::hdtd(1.0).unwrap();
        assert_eq!(t.target(5.0, 0.0).unwrap(), 5.0);
    }

    #[test]
    fn hdtd_singularity_is_an_error() {
        let t = Transform::hdtd(1.0).unwrap();
        assert!(matches!(
            t.target(0.0, -1.0),
            Err(Error::HdtdSingularity { .. })
        ));
    }

    #[test]
    fn hyperbolic_equivalent_identity_at_reference() {
        for r_ref in [0.5, 1.0, 3.25, -2.0] {
            let g = RewardTransform::new(0.7, 0.3, r_ref).unwrap();
            assert_eq!(g.apply(r_ref), r_ref);
        }
    }

    #[test]
    fn hyperbolic_equivalent_closed_form() {
        // gamma = e^{-1}, k = 1 gives eta = 1; then g(2) = e.
        let g = RewardTransform::new((-1.0f64).exp(), 1.0, 1.0).unwrap();
        assert!((g.eta() - 1.0).abs() < 1e-15);
        assert!((g.apply(2.0) - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_equivalent_zero_is_zero() {
        let g = RewardTransform::new(0.5, 2.0, 1.5).unwrap();
        assert_eq!(g.apply(0.0), 0.0);
    }

    #[test]
    fn eta_positive() {
        for gamma in [0.01, 0.5, 0.99] {
            for k in [0.01, 1.0, 10.0] {
                let g = RewardTransform::new(gamma, k, 1.0).unwrap();
                assert!(g.eta() > 0.0);
            }
        }
    }

    #[test]
    fn power_discount_closed_form() {
        let d = DiscountFunction::power(0.5, 1.0).unwrap();
        assert_eq!(d.apply(3.0), 1.0); // (3+1)^0.5 - 1
        assert_eq!(d.apply(0.0), 0.0);
    }

    #[test]
    fn power_discount_identity_at_gamma_one() {
        let d = DiscountFunction::power(1.0, 1.0).unwrap();
        assert_eq!(d.apply(-7.0), -7.0);
        assert_eq!(d.apply(12.5), 12.5);
    }

    #[test]
    fn derivative_closed_forms() {
        let d = DiscountFunction::power(0.5, 1.0).unwrap();
        assert_eq!(d.derivative(3.0), 0.25); // 0.5/4^{0.5}
        for kappa in [0.3, 1.0] {
            // Derivative peaks at the origin, at κγ.
            let d = DiscountFunction::power(0.7, kappa).unwrap();
            assert_eq!(d.derivative(0.0), kappa * 0.7);
            assert!(d.derivative(2.0) < d.derivative(0.0));
        }
        // At γ = 1 the slope is κ everywhere.
        let d = DiscountFunction::power(1.0, 0.8).unwrap();
        for v in [-4.0, 0.0, 9.0] {
            assert_eq!(d.derivative(v), 0.8);
        }
        let lin = DiscountFunction::linear(0.9, 1.0).unwrap();
        for v in [-5.0, 0.0, 17.0] {
            assert_eq!(lin.derivative(v), 0.9);
        }
    }

    #[test]
    fn squash_examples() {
        let h0 = Squash::new(0.0).unwrap();
        assert_eq!(h0.squash(0.0), 0.0);
        assert_eq!(h0.squash(3.0), 1.0); // sqrt(4) - 1
        assert_eq!(h0.unsquash(1.0), 3.0);
        let h = Squash::new(DEFAULT_SQUASH_EPS).unwrap();
        let x = 1234.5;
        assert!((h.unsquash(h.squash(x)) - x).abs() < 1e-6);
    }

    #[test]
    fn lipschitz_bounds() {
        assert_eq!(Transform::linear(0.9).unwrap().lipschitz_bound(), Some(0.9));
        assert_eq!(
            Transform::power_discount(0.5, 0.8).unwrap().lipschitz_bound(),
            Some(0.8)
        );
        assert_eq!(
            Transform::reward(0.6, 1.0, 1.0).unwrap().lipschitz_bound(),
            Some(0.6)
        );
        assert_eq!(Transform::hdtd(1.0).unwrap().lipschitz_bound(), None);
        let s = Transform::squash_target(0.5, 0.01).unwrap();
        assert!((s.lipschitz_bound().unwrap() - 0.51 * 0.5 * 100.0).abs() < 1e-12);
        let s0 = Transform::squash_target(0.5, 0.0).unwrap();
        assert_eq!(s0.lipschitz_bound(), Some(f64::INFINITY));
    }

    #[test]
    fn constructor_rejections() {
        assert!(Transform::linear(1.5).is_err());
        assert!(Transform::reward(1.0, 1.0, 1.0).is_err());
        assert!(Transform::reward(0.5, 0.0, 1.0).is_err());
        assert!(Transform::reward(0.5, 1.0, 0.0).is_err());
        assert!(DiscountFunction::power(0.5, 0.0).is_err());
        assert!(DiscountFunction::power(0.5, 1.1).is_err());
        assert!(Transform::hdtd(0.0).is_err());
    }

    #[test]
    fn wire_round_trips() {
        let transforms = vec![
            Transform::linear(0.5).unwrap(),
            Transform::reward(0.7, 0.4, 2.0).unwrap(),
            Transform::linear_discount(0.9, 0.8).unwrap(),
            Transform::power_discount(0.5, 1.0).unwrap(),
            Transform::squash_target(0.99, 0.01).unwrap(),
            Transform::hdtd(0.3).unwrap(),
        ];
        for t in transforms {
            let json = serde_json::to_string(&t).unwrap();
            let back: Transform = serde_json::from_str(&json).unwrap();
            assert_eq!(t, back, "round trip through {json}");
        }
    }

    #[test]
    fn wire_parses_spec_shapes() {
        let t: Transform = serde_json::from_str(r#"{"kind":"power","gamma":0.5,"kappa":1.0}"#).unwrap();
        assert_eq!(t, Transform::power_discount(0.5, 1.0).unwrap());
        let t: Transform = serde_json::from_str(r#"{"kind":"hdtd","k":2.0}"#).unwrap();
        assert_eq!(t, Transform::hdtd(2.0).unwrap());
        // Missing required field and unknown kind are rejected.
        assert!(serde_json::from_str::<Transform>(r#"{"kind":"power"}"#).is_err());
        assert!(serde_json::from_str::<Transform>(r#"{"kind":"nope","gamma":0.5}"#).is_err());
        assert!(serde_json::from_str::<Transform>(r#"{"kind":"linear","gamma":0.5,"zzz":1}"#).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Myopic: g_0 vanishes everywhere.
            #[test]
            fn discount_property_myopic(v in -100.0..100.0f64, kappa in 0.05..1.0f64) {
                let d = DiscountFunction::power(0.0, kappa).unwrap();
                prop_assert_eq!(d.apply(v), 0.0);
            }

            // Undiscounted: g_1 is the identity, exactly, for kappa = 1.
            #[test]
            fn discount_property_identity(v in -100.0..100.0f64) {
                let d = DiscountFunction::power(1.0, 1.0).unwrap();
                prop_assert_eq!(d.apply(v), v);
            }

            // Odd: g(v) = -g(-v).
            #[test]
            fn discount_property_odd(v in -100.0..100.0f64, gamma in 0.0..1.0f64, kappa in 0.05..1.0f64) {
                let d = DiscountFunction::power(gamma, kappa).unwrap();
                prop_assert!((d.apply(v) + d.apply(-v)).abs() <= 1e-12);
            }

            // Monotone in gamma for positive v.
            #[test]
            fn discount_property_monotone_in_gamma(
                v in 0.01..100.0f64,
                lo in 0.0..0.98f64,
                gap in 0.01..0.5f64,
            ) {
                let hi = (lo + gap).min(1.0);
                let d_hi = DiscountFunction::power(hi, 1.0).unwrap();
                let d_lo = DiscountFunction::power(lo, 1.0).unwrap();
                prop_assert!(d_hi.apply(v) > d_lo.apply(v));
            }

            // Closed-form derivative matches central finite differences away
            // from the origin.
            #[test]
            fn discount_derivative_matches_finite_difference(
                v in 0.25..50.0f64,
                sign in prop::bool::ANY,
                gamma in 0.0..1.0f64,
                kappa in 0.05..1.0f64,
            ) {
                let v = if sign { v } else { -v };
                let d = DiscountFunction::power(gamma, kappa).unwrap();
                let h = 1e-5;
                let fd = (d.apply(v + h) - d.apply(v - h)) / (2.0 * h);
                prop_assert!((fd - d.derivative(v)).abs() < 1e-6,
                    "fd {} vs closed form {}", fd, d.derivative(v));
            }

            // Squash round-trips to 1e-9 relative across a wide range.
            #[test]
            fn squash_round_trip(x in -1e6..1e6f64, eps in 0.0..0.5f64) {
                let h = Squash::new(eps).unwrap();
                let back = h.unsquash(h.squash(x));
                prop_assert!((back - x).abs() <= 1e-9 * x.abs().max(1.0));
            }

            // Targets respect their advertised Lipschitz bound in v.
            #[test]
            fn targets_respect_lipschitz_bound(
                r in -5.0..5.0f64,
                x1 in -50.0..50.0f64,
                x2 in -50.0..50.0f64,
                gamma01 in 0.001..0.999f64,
                kappa in 0.05..1.0f64,
                k in 0.1..5.0f64,
            ) {
                let transforms = vec![
                    Transform::linear(gamma01).unwrap(),
                    Transform::reward(gamma01, k, 1.0).unwrap(),
                    Transform::linear_discount(gamma01, kappa).unwrap(),
                    Transform::power_discount(gamma01, kappa).unwrap(),
                    Transform::squash_target(gamma01, 0.01).unwrap(),
                ];
                for t in transforms {
                    let bound = t.lipschitz_bound().unwrap();
                    let f1 = t.target(r, x1).unwrap();
                    let f2 = t.target(r, x2).unwrap();
                    prop_assert!(
                        (f1 - f2).abs() <= bound * (x1 - x2).abs() + 1e-9,
                        "{} violated its bound {}", t.kind_name(), bound
                    );
                }
            }
        }
    }
}
