//! Floating-point companions of the exact engine: a tolerance-based decision,
//! numeric extremal elements, increasing paths between comparable
//! configurations, the symmetric six-point flow, and a Schur-type test for
//! symmetric functions.
//!
//! Path coordinates are algebraic irrationals in general, so everything here
//! works in `f64` with explicit tolerances.

mod extremal;
mod increasing;
mod ode;
pub(crate) mod roots;
mod schur;

pub use extremal::{find_extremal_numeric, ExtremalRole};
pub use increasing::{increasing_path_k3, increasing_path_nk1};
pub use ode::ode_demo_path;
pub use schur::{schur3_check, schur3_expression, SchurOutcome};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default tolerances.
pub const CONSERVATION_TOL: f64 = 1e-8;
pub const MARGIN_TOL: f64 = 1e-8;
pub const NEWTON_TOL: f64 = 1e-10;
pub const DEFAULT_STEPS: usize = 256;
pub const DEFAULT_GRID: usize = 4096;

/// A configuration of floats in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatConfig {
    values: Vec<f64>,
}

impl FloatConfig {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {v}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(FloatConfig { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum_i x_i^j`.
    pub fn power_sum(&self, j: usize) -> f64 {
        self.values.iter().map(|v| v.powi(j as i32)).sum()
    }

    /// Largest coordinate-wise distance to `other` (same length assumed).
    pub fn distance(&self, other: &FloatConfig) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<&crate::order::Configuration> for FloatConfig {
    fn from(c: &crate::order::Configuration) -> Self {
        FloatConfig {
            values: c.values().iter().map(crate::to_f64).collect(),
        }
    }
}

/// A sampled path `t -> configuration` with its quality measures.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub samples: Vec<(f64, FloatConfig)>,
    /// Largest drift of `s_1, ..., s_{k-1}` from their starting values.
    pub conservation_error: f64,
    /// Smallest numeric `r_k` minimum over consecutive sample pairs.
    pub monotonicity_margin: f64,
    /// False when integration stopped early.
    pub completed: bool,
}

impl PathResult {
    pub(crate) fn from_trajectory(configs: Vec<Vec<f64>>, k: usize, completed: bool) -> Self {
        let last = configs.len().saturating_sub(1).max(1) as f64;
        let samples: Vec<(f64, FloatConfig)> = configs
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as f64 / last, FloatConfig::new(v).expect("finite path")))
            .collect();
        let configs: Vec<FloatConfig> = samples.iter().map(|(_, c)| c.clone()).collect();
        PathResult {
            conservation_error: conservation_error(&configs, k),
            monotonicity_margin: monotonicity_margin(&configs, k, Exec::default()),
            samples,
            completed,
        }
    }

    pub fn start(&self) -> &FloatConfig {
        &self.samples[0].1
    }

    pub fn end(&self) -> &FloatConfig {
        &self.samples[self.samples.len() - 1].1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericStatus {
    Holds,
    Fails,
    MomentViolation { index: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericVerdict {
    pub status: NumericStatus,
    /// Smallest `r_k` value found (0 for an empty problem).
    pub min: f64,
    pub argmin: f64,
}

impl NumericVerdict {
    pub fn holds(&self) -> bool {
        self.status == NumericStatus::Holds
    }
}

/// `r_k(x) = sum_i w_i (a_i - x)_+^(k-1)` in floating point.
pub fn numeric_rk(nodes: &[(f64, f64)], k: usize, x: f64) -> f64 {
    nodes
        .iter()
        .filter(|(a, _)| *a > x)
        .map(|(a, w)| w * (a - x).powi(k as i32 - 1))
        .sum()
}

/// Grid minimum of `r_k` over the hull of the arguments: `grid` equally
/// spaced points plus every argument, then three rounds of local refinement
/// around the lowest local minima.
pub fn numeric_min(nodes: &[(f64, f64)], k: usize, grid: usize) -> (f64, f64) {
    if nodes.is_empty() {
        return (0.0, 0.0);
    }
    let lo = nodes.iter().map(|n| n.0).fold(f64::INFINITY, f64::min);
    let hi = nodes.iter().map(|n| n.0).fold(f64::NEG_INFINITY, f64::max);
    let grid = grid.max(2);
    let mut xs: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .chain(nodes.iter().map(|n| n.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals: Vec<f64> = xs.iter().map(|&x| numeric_rk(nodes, k, x)).collect();
    let mut best = (f64::INFINITY, lo);
    for (&x, &v) in xs.iter().zip(&vals) {
        if v < best.0 {
            best = (v, x);
        }
    }
    let mut minima: Vec<usize> = (0..xs.len())
        .filter(|&i| {
            (i == 0 || vals[i] <= vals[i - 1]) && (i + 1 == xs.len() || vals[i] <= vals[i + 1])
        })
        .collect();
    minima.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    for &i in minima.iter().take(8) {
        let mut left = xs[i.saturating_sub(1)];
        let mut right = xs[(i + 1).min(xs.len() - 1)];
        for _ in 0..3 {
            let mut local = (f64::INFINITY, left);
            for s in 0..=64 {
                let x = left + (right - left) * s as f64 / 64.0;
                let v = numeric_rk(nodes, k, x);
                if v < local.0 {
                    local = (v, x);
                }
            }
            if local.0 < best.0 {
                best = local;
            }
            let h = (right - left) / 64.0;
            left = (local.1 - h).max(lo);
            right = (local.1 + h).min(hi);
        }
    }
    best
}

/// Tolerance version of the exact decision: every moment `j < k` must vanish
/// within `tol * sum_i |w_i| |a_i|^j`, and the grid minimum of `r_k` must be
/// at least `-tol`.
pub fn numeric_decide(nodes: &[(f64, f64)], k: usize, tol: f64) -> NumericVerdict {
    numeric_decide_with(nodes, k, tol, DEFAULT_GRID)
}

pub fn numeric_decide_with(nodes: &[(f64, f64)], k: usize, tol: f64, grid: usize) -> NumericVerdict {
    let (min, argmin) = numeric_min(nodes, k, grid);
    for j in 0..k {
        let value: f64 = nodes.iter().map(|(a, w)| w * a.powi(j as i32)).sum();
        let scale: f64 = nodes.iter().map(|(a, w)| w.abs() * a.abs().powi(j as i32)).sum();
        if value.abs() > tol * scale.max(1.0) {
            return NumericVerdict {
                status: NumericStatus::MomentViolation { index: j, value },
                min,
                argmin,
            };
        }
    }
    NumericVerdict {
        status: if min >= -tol {
            NumericStatus::Holds
        } else {
            NumericStatus::Fails
        },
        min,
        argmin,
    }
}

/// Nodes `+1` at each `x_i` and `-1` at each `y_i`.
pub fn difference_nodes(x: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    x.iter()
        .map(|&v| (v, 1.0))
        .chain(y.iter().map(|&v| (v, -1.0)))
        .collect()
}

/// Largest drift of `s_1, ..., s_{k-1}` from the first configuration.
pub fn conservation_error(configs: &[FloatConfig], k: usize) -> f64 {
    let Some(first) = configs.first() else {
        return 0.0;
    };
    let base: Vec<f64> = (1..k).map(|j| first.power_sum(j)).collect();
    let base = &base;
    configs
        .iter()
        .flat_map(|c| (1..k).map(move |j| (c.power_sum(j) - base[j - 1]).abs()))
        .fold(0.0, f64::max)
}

/// Smallest grid minimum of `r_k` for `configs[i+1] - configs[i]`.
pub fn monotonicity_margin(configs: &[FloatConfig], k: usize, exec: Exec) -> f64 {
    if configs.len() < 2 {
        return 0.0;
    }
    exec.map_range(configs.len() - 1, |i| {
        let nodes = difference_nodes(configs[i + 1].values(), configs[i].values());
        numeric_min(&nodes, k, DEFAULT_GRID).0
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min)
    .min(0.0)
}

/// Power sums `s_1, ..., s_{k-1}` agree within `tol` times their scale.
pub(crate) fn same_class(a: &[f64], b: &[f64], k: usize, tol: f64) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for j in 1..k {
        let sa: f64 = a.iter().map(|v| v.powi(j as i32)).sum();
        let sb: f64 = b.iter().map(|v| v.powi(j as i32)).sum();
        let scale: f64 = a.iter().chain(b).map(|v| v.abs().powi(j as i32)).sum::<f64>();
        if (sa - sb).abs() > tol * scale.max(1.0) {
            return Err(Error::Numeric(format!(
                "power sums of degree {j} differ: {sa} vs {sb}"
            )));
        }
    }
    Ok(())
}
