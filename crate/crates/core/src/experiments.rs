//! Parameter sweeps producing tabular data: discount-curve families, action
//! gaps of the two-action risk example, and ordering-agreement grids.
//!
//! Every sweep is a pure function of its parameters; reruns produce
//! identical tables.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mdp::generators;
use crate::returns::{verify_ordering_equivalence, OrderingVerdict};
use crate::solvers::{action_values, fixed_point, ValueVector};
use crate::transforms::{DiscountFamily, DiscountFunction, Transform};

/// One axis of a rectangular sweep: a name, numeric tick values, and
/// optional display labels for categorical axes (series names).
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub ticks: Vec<f64>,
    pub labels: Option<Vec<String>>,
}

impl Axis {
    pub fn numeric(name: &str, ticks: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            ticks,
            labels: None,
        }
    }

    pub fn labeled(name: &str, labels: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            ticks: (0..labels.len()).map(|i| i as f64).collect(),
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    /// Display label of tick `i` (falls back to the numeric tick).
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => format!("{}", self.ticks[i]),
        }
    }
}

/// Rectangular table of finite scalars with axis metadata, stored row-major
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub cells: Vec<f64>,
    pub metadata: BTreeMap<String, String>,
}

impl SweepResult {
    pub fn new(
        axes: Vec<Axis>,
        cells: Vec<f64>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        let expected: usize = axes.iter().map(Axis::len).product();
        if axes.iter().any(Axis::is_empty) {
            return Err(Error::MalformedSweep("axes must be non-empty".into()));
        }
        if cells.len() != expected {
            return Err(Error::MalformedSweep(format!(
                "cell count {} does not match axis product {expected}",
                cells.len()
            )));
        }
        if let Some(axis) = axes
            .iter()
            .find(|a| a.labels.as_ref().is_some_and(|l| l.len() != a.ticks.len()))
        {
            return Err(Error::MalformedSweep(format!(
                "axis '{}' has mismatched labels",
                axis.name
            )));
        }
        if let Some(bad) = cells.iter().find(|c| !c.is_finite()) {
            return Err(Error::MalformedSweep(format!("non-finite cell {bad}")));
        }
        Ok(Self {
            axes,
            cells,
            metadata,
        })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    /// Cell at a full multi-index.
    pub fn cell(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.axes.len());
        let mut flat = 0;
        for (i, axis) in index.iter().zip(self.axes.iter()) {
            assert!(*i < axis.len());
            flat = flat * axis.len() + i;
        }
        self.cells[flat]
    }

    /// Contiguous row of the last axis at a fixed first-axis index
    /// (two-axis results only).
    pub fn series_values(&self, series: usize) -> &[f64] {
        assert_eq!(self.axes.len(), 2, "series_values requires a 2-axis sweep");
        let width = self.axes[1].len();
        &self.cells[series * width..(series + 1) * width]
    }
}

/// Default γ set for discount curves.
pub fn default_curve_gammas() -> Vec<f64> {
    vec![0.25, 0.5, 0.75, 0.9, 0.99]
}

/// Default symmetric value grid for discount curves: −10 to 10, step 0.1.
/// Built so that the grid is exactly symmetric in floating point.
pub fn default_v_grid() -> Vec<f64> {
    (0..=200).map(|i| (i as f64 - 100.0) * 0.1).collect()
}

/// Default branch probabilities for the action-gap sweep.
pub fn default_p_list() -> Vec<f64> {
    vec![0.05, 0.1, 0.25, 0.5, 1.0]
}

/// Default γ grid for the action-gap sweep: 0 to 1, step 0.01.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Default delayed-reward grid for [`ordering_grid`], relative to `r_ref`:
/// 21 points from 0.5·r_ref to 5.5·r_ref.
pub fn default_r_grid(r_ref: f64) -> Vec<f64> {
    (0..21).map(|i| r_ref * (0.5 + 0.25 * i as f64)).collect()
}

/// Default delay grid for [`ordering_grid`]: 0 to 50 steps.
pub fn default_t_grid() -> Vec<usize> {
    (0..=50).collect()
}

/// Linear (`γv`, dashed) and non-linear (`κ·sign(v)((|v|+1)^γ − 1)`, solid)
/// discount curves for each γ, tabulated over `v_grid`.
///
/// Series are interleaved per γ, linear first; the metadata key
/// `dashed_series` lists the comma-separated indices of the linear curves.
pub fn discount_curves(gammas: &[f64], v_grid: &[f64], kappa: f64) -> Result<SweepResult> {
    if gammas.is_empty() || v_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be non-empty".into()));
    }
    let mut labels = Vec::with_capacity(2 * gammas.len());
    let mut cells = Vec::with_capacity(2 * gammas.len() * v_grid.len());
    let mut dashed = Vec::new();
    for &gamma in gammas {
        let linear = DiscountFunction::linear(gamma, 1.0)?;
        let power = DiscountFunction::power(gamma, kappa)?;
        dashed.push(labels.len().to_string());
        labels.push(format!("linear gamma={gamma}"));
        cells.extend(v_grid.iter().map(|&v| linear.apply(v)));
        labels.push(format!("power gamma={gamma}"));
        cells.extend(v_grid.iter().map(|&v| power.apply(v)));
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("kappa".into(), kappa.to_string());
    metadata.insert("dashed_series".into(), dashed.join(","));
    SweepResult::new(
        vec![
            Axis::labeled("series", labels),
            Axis::numeric("v", v_grid.to_vec()),
        ],
        cells,
        metadata,
    )
}

/// Action gap `q(s, risky) − q(s, sure)` of the two-action example, swept
/// over `gamma_grid` for each branch probability in `p_list`.
///
/// The successor values v(sure) = 1 and v(risky) = 2/p are injected directly
/// and the gap is computed through the exact action-value backup.
pub fn action_gap_sweep(
    p_list: &[f64],
    gamma_grid: &[f64],
    family: DiscountFamily,
    kappa: f64,
) -> Result<SweepResult> {
    if p_list.is_empty() || gamma_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be non-empty".into()));
    }
    for &p in p_list {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "branch probability must be in (0,1], got {p}"
            )));
        }
    }
    let mut cells = Vec::with_capacity(p_list.len() * gamma_grid.len());
    for &p in p_list {
        let mdp = generators::two_action_gap_mdp(p);
        let v = ValueVector(generators::two_action_gap_values(p));
        for &gamma in gamma_grid {
            let transform = Transform::Discount(DiscountFunction::new(family, gamma, kappa)?);
            let q = action_values(&mdp, &transform, &v)?;
            cells.push(q.get(0, 1) - q.get(0, 0));
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "family".into(),
        match family {
            DiscountFamily::Linear => "linear".into(),
            DiscountFamily::Power => "power".into(),
        },
    );
    metadata.insert("kappa".into(), kappa.to_string());
    let labels = p_list.iter().map(|p| format!("p={p}")).collect();
    let mut series = Axis::labeled("p", labels);
    series.ticks = p_list.to_vec();
    SweepResult::new(
        vec![series, Axis::numeric("gamma", gamma_grid.to_vec())],
        cells,
        metadata,
    )
}

/// The same gap computed the long way: the successor values arise as the
/// fixed point of an explicit episodic MDP instead of being injected.
pub fn embedded_action_gap(p: f64, discount: DiscountFunction) -> Result<f64> {
    let mdp = generators::two_action_gap_embedded(p);
    let policy = crate::mdp::Policy::uniform(mdp.n_states(), mdp.n_actions());
    let transform = Transform::Discount(discount);
    let (v, _) = fixed_point(
        &mdp,
        &policy,
        &transform,
        ValueVector::zeros(mdp.n_states()),
        1e-12,
        100_000,
    )?;
    let q = action_values(&mdp, &transform, &v)?;
    Ok(q.get(0, 1) - q.get(0, 0))
}

/// Ordering-agreement grid over the default `(R, T)` grids.
///
/// Cell codes: 1 = both orderings prefer alike, 0 = they disagree,
/// −1 = boundary tie (excluded from the agreement fraction). Aggregate
/// statistics land in the metadata.
pub fn ordering_grid(gamma: f64, k: f64, r_ref: f64) -> Result<SweepResult> {
    ordering_grid_with(gamma, k, r_ref, &default_r_grid(r_ref), &default_t_grid())
}

/// [`ordering_grid`] with explicit grids.
pub fn ordering_grid_with(
    gamma: f64,
    k: f64,
    r_ref: f64,
    r_grid: &[f64],
    t_grid: &[usize],
) -> Result<SweepResult> {
    let verdicts = verify_ordering_equivalence(gamma, k, r_ref, r_grid, t_grid)?;
    let cells: Vec<f64> = verdicts
        .iter()
        .map(|v| {
            if v.boundary {
                -1.0
            } else if v.agree {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let boundary = verdicts.iter().filter(|v| v.boundary).count();
    let eligible = verdicts.len() - boundary;
    let agreeing = verdicts.iter().filter(|v| !v.boundary && v.agree).count();
    let prefer_later = verdicts
        .iter()
        .filter(|v| v.prefers_later_by_hyperbolic)
        .count();

    let mut metadata = BTreeMap::new();
    metadata.insert("gamma".into(), gamma.to_string());
    metadata.insert("k".into(), k.to_string());
    metadata.insert("r_ref".into(), r_ref.to_string());
    metadata.insert("boundary_cells".into(), boundary.to_string());
    metadata.insert("eligible_cells".into(), eligible.to_string());
    metadata.insert("prefer_later_cells".into(), prefer_later.to_string());
    metadata.insert(
        "agreement_fraction".into(),
        if eligible == 0 {
            "undefined (0 eligible cells)".into()
        } else {
            (agreeing as f64 / eligible as f64).to_string()
        },
    );
    let labels = r_grid.iter().map(|r| format!("R={r}")).collect();
    let mut series = Axis::labeled("R", labels);
    series.ticks = r_grid.to_vec();
    SweepResult::new(
        vec![
            series,
            Axis::numeric("T", t_grid.iter().map(|&t| t as f64).collect()),
        ],
        cells,
        metadata,
    )
}

/// Flat list of verdicts for the default ordering grids, in the same cell
/// order as [`ordering_grid`].
pub fn ordering_verdicts(gamma: f64, k: f64, r_ref: f64) -> Result<Vec<OrderingVerdict>> {
    verify_ordering_equivalence(gamma, k, r_ref, &default_r_grid(r_ref), &default_t_grid())
}
