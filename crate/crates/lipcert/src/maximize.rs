//! Validated branch-and-bound enclosure of the interval maximum value
//! and maximum set of a sound, inclusion-monotone interval objective
//! over a finite union of hyperboxes.
//!
//! Each iteration evaluates the objective on every box, takes the
//! maximum lower and upper endpoints as the current value enclosure,
//! retains the boxes that could still contain a maximum point, and
//! bisects the survivors along all dimensions. Refinement never widens
//! the value enclosure, and the union of retained boxes always covers
//! the true maximum set (conditional on the objective contract).

use crate::interval::{HyperBox, Interval};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Budgets and target width for the branch-and-bound loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxParams {
    /// Maximum number of iterations of the main loop.
    pub max_iterations: usize,
    /// Bisection is skipped once it would push the box count past this.
    pub max_boxes: usize,
    /// Stop once the value enclosure is at most this wide; a negative
    /// target disables the width stop entirely.
    pub target_width: f64,
}

impl Default for MaxParams {
    fn default() -> MaxParams {
        MaxParams {
            max_iterations: 100,
            max_boxes: 1_000_000,
            target_width: 0.0,
        }
    }
}

/// Which stop condition fired first, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    IterBudget,
    BoxBudget,
    WidthReached,
}

/// One row of the refinement trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub value: Interval,
    pub boxes_retained: usize,
}

/// Result of the branch-and-bound maximization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxResult {
    /// Enclosure of the maximum value.
    pub value: Interval,
    /// Retained boxes of the final iteration; their union encloses the
    /// maximum set.
    #[serde(rename = "max_set_boxes")]
    pub boxes: Vec<HyperBox>,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub trace: Vec<TraceRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum MaximizeError {
    #[error("empty input box list")]
    EmptyInput,
    #[error("boxes have mixed dimensions: {0} vs {1}")]
    MixedDims(usize, usize),
    #[error("objective evaluation failed: {0}")]
    Objective(String),
    #[error("grid oracle budget exceeded: {0}")]
    OracleBudget(String),
}

/// `2^n * count`, saturating so huge dimensions simply exhaust budgets.
fn bisection_fanout(n: usize, count: usize) -> usize {
    if n >= usize::BITS as usize {
        return usize::MAX;
    }
    (1usize << n).saturating_mul(count)
}

/// Encloses the maximum value and maximum set of `f` over the union of
/// `boxes`. The guarantees are conditional on `f` being sound (its
/// result contains the true range over the box) and inclusion-monotone.
pub fn maximize<F>(f: F, boxes: &[HyperBox], params: &MaxParams) -> Result<MaxResult, MaximizeError>
where
    F: Fn(&HyperBox) -> Result<Interval, String> + Sync,
{
    if boxes.is_empty() {
        return Err(MaximizeError::EmptyInput);
    }
    let n = boxes[0].dims();
    if let Some(b) = boxes.iter().find(|b| b.dims() != n) {
        return Err(MaximizeError::MixedDims(n, b.dims()));
    }
    // m_iter = 0 behaves as 1: the loop body always runs once.
    let max_iterations = params.max_iterations.max(1);

    let mut current: Vec<HyperBox> = boxes.to_vec();
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut iter = 0usize;

    loop {
        iter += 1;
        // One evaluation per box, reused by the retention pass.
        let evals: Vec<Interval> = current
            .par_iter()
            .map(|b| f(b).map_err(MaximizeError::Objective))
            .collect::<Result<_, _>>()?;
        let uep = evals.iter().map(Interval::hi).fold(f64::NEG_INFINITY, f64::max);
        let lep = evals.iter().map(Interval::lo).fold(f64::NEG_INFINITY, f64::max);
        let value = Interval::new(lep, uep);

        // Retain boxes whose value interval still reaches the best
        // lower bound; ties keep the box so maximizers on shared faces
        // are never dropped.
        let retained: Vec<HyperBox> = current
            .iter()
            .zip(&evals)
            .filter(|(_, e)| e.hi() >= lep)
            .map(|(b, _)| b.clone())
            .collect();

        trace.push(TraceRow {
            iter,
            value,
            boxes_retained: retained.len(),
        });

        let fanout = bisection_fanout(n, retained.len());
        let over_box_budget = fanout >= params.max_boxes;

        // Stop conditions in declared order; the first satisfied one is
        // reported.
        let stop_reason = if iter >= max_iterations {
            Some(StopReason::IterBudget)
        } else if over_box_budget {
            Some(StopReason::BoxBudget)
        } else if value.width() <= params.target_width {
            Some(StopReason::WidthReached)
        } else {
            None
        };

        if let Some(stop_reason) = stop_reason {
            return Ok(MaxResult {
                value,
                boxes: retained,
                iterations: iter,
                stop_reason,
                trace,
            });
        }

        // Guarded bisection: only executed when it stays within budget
        // (always true here, since over-budget already stopped).
        current = retained.iter().flat_map(HyperBox::bisect).collect();
    }
}

/// Dense-grid reference for the maximum value and near-maximum set of a
/// point objective. Test oracle only: a lower-bound witness for the
/// value and a subset witness for the retained boxes.
pub fn maxv_maxs_reference<F>(
    f: F,
    region: &HyperBox,
    grid: usize,
) -> Result<(Interval, Vec<Vec<f64>>), MaximizeError>
where
    F: Fn(&[f64]) -> f64,
{
    let n = region.dims();
    if n > 3 {
        return Err(MaximizeError::OracleBudget(format!("{n} dimensions")));
    }
    let total = (grid as u128).pow(n as u32);
    if grid < 2 || total > 1_000_000 {
        return Err(MaximizeError::OracleBudget(format!("{total} grid points")));
    }

    let coord = |k: usize, i: usize| -> f64 {
        let c = region.coord(k);
        c.lo() + (c.hi() - c.lo()) * (i as f64) / ((grid - 1) as f64)
    };

    let mut points: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<f64> = (0..n).map(|k| coord(k, idx[k])).collect();
        let v = f(&x);
        points.push((x, v));
        // odometer increment
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < grid {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                let max = points.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
                // resolution: one grid step of the steepest observed change
                let tol = points
                    .iter()
                    .map(|(_, v)| max - v)
                    .filter(|d| *d > 0.0)
                    .fold(f64::INFINITY, f64::min)
                    .min(1e-9);
                let arg: Vec<Vec<f64>> = points
                    .into_iter()
                    .filter(|(_, v)| max - *v <= tol)
                    .map(|(x, _)| x)
                    .collect();
                return Ok((Interval::point(max), arg));
            }
        }
    }
}
