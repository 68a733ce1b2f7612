//! Interval enclosure of the Clarke-gradient of a network over a
//! hyperbox, via per-layer activation-derivative intervals and the
//! hyperbox chain rule, together with its 1-norm.
//!
//! The enclosure is formed as the interval matrix product
//! `J = W_last * D_last * ... * D_1 * W_1`, multiplied left to right
//! from the output side. Diagonal derivative factors are kept as
//! vectors and fused into the running product as column scalings.
//! For every point `x` in the box, the Clarke gradient of output `j`
//! at `x` is contained in row `j` of the result.

use crate::interval::{norm1, HyperBox, Interval, IntervalMatrix};
use crate::network::{sigmoid, widen_ulps, ActivationKind, Network, NetworkError};

/// Interval Jacobian of a network over a box, with per-output 1-norms.
#[derive(Debug, Clone)]
pub struct GradEnclosure {
    pub jacobian: IntervalMatrix,
    pub norm1_per_output: Vec<Interval>,
}

/// Enclosure of the Clarke derivative of an activation over a
/// pre-activation interval.
pub fn activation_grad_interval(kind: ActivationKind, z: &Interval) -> Interval {
    match kind {
        ActivationKind::Identity => Interval::ONE,
        ActivationKind::ReLU => {
            if z.lo() > 0.0 {
                Interval::ONE
            } else if z.hi() < 0.0 {
                Interval::ZERO
            } else {
                // Clarke gradient at 0 is [0, 1]; hull over a straddling interval
                Interval::new(0.0, 1.0)
            }
        }
        ActivationKind::Sigmoid => unimodal_grad(z, sigmoid_deriv, 0.25),
        ActivationKind::Tanh => unimodal_grad(z, tanh_deriv, 1.0),
    }
}

fn sigmoid_deriv(x: f64) -> f64 {
    let s = sigmoid(x);
    s * (1.0 - s)
}

fn tanh_deriv(x: f64) -> f64 {
    let t = x.tanh();
    1.0 - t * t
}

/// Image enclosure for a derivative that increases on (-inf, 0] and
/// decreases on [0, inf) with maximum `peak` at 0. Endpoint values are
/// widened by 4 ulps each side to cover elementary-function rounding.
fn unimodal_grad(z: &Interval, deriv: fn(f64) -> f64, peak: f64) -> Interval {
    let at_lo = widen_ulps(deriv(z.lo()), 4, (0.0, peak));
    let at_hi = widen_ulps(deriv(z.hi()), 4, (0.0, peak));
    let lo = at_lo.lo().min(at_hi.lo());
    let hi = if z.contains(0.0) {
        peak
    } else {
        at_lo.hi().max(at_hi.hi())
    };
    Interval::new(lo, hi)
}

/// Row-vector times point matrix with fused diagonal scaling:
/// `out_k = sum_i (row_i * d_i) * W[i][k]`.
fn scaled_row_times_matrix(row: &[Interval], diag: &[Interval], w: &[Vec<f64>]) -> Vec<Interval> {
    let cols = w[0].len();
    let mut out = vec![Interval::ZERO; cols];
    for (i, (r, d)) in row.iter().zip(diag).enumerate() {
        let rd = r.mul(d);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = slot.add(&rd.scale(w[i][k]));
        }
    }
    out
}

/// Jacobian enclosure rows for the selected outputs.
fn jacobian_rows(
    net: &Network,
    box_: &HyperBox,
    outputs: &[usize],
) -> Result<Vec<Vec<Interval>>, NetworkError> {
    let fwd = net.forward_intervals(box_)?;
    let layers = net.layers();
    let last = layers.last().unwrap();
    let diags: Vec<Vec<Interval>> = layers[..layers.len() - 1]
        .iter()
        .zip(&fwd.pre_activations)
        .map(|(layer, pre)| {
            pre.iter()
                .map(|z| activation_grad_interval(layer.activation, z))
                .collect()
        })
        .collect();
    outputs
        .iter()
        .map(|&j| {
            let mut row: Vec<Interval> = last.weights[j].iter().map(|&w| Interval::point(w)).collect();
            for (layer, diag) in layers[..layers.len() - 1].iter().zip(&diags).rev() {
                row = scaled_row_times_matrix(&row, diag, &layer.weights);
            }
            Ok(row)
        })
        .collect()
}

/// Full interval Jacobian of the network over a box.
pub fn interval_jacobian(net: &Network, box_: &HyperBox) -> Result<GradEnclosure, NetworkError> {
    let all: Vec<usize> = (0..net.output_count()).collect();
    let rows = jacobian_rows(net, box_, &all)?;
    let norms = rows.iter().map(|r| norm1(r)).collect();
    let entries: Vec<Interval> = rows.into_iter().flatten().collect();
    Ok(GradEnclosure {
        jacobian: IntervalMatrix::new(net.output_count(), net.input_dim(), entries),
        norm1_per_output: norms,
    })
}

/// 1-norm enclosure of one Jacobian row: the branch-and-bound objective
/// for Lipschitz certification under the inf-perturbation norm.
pub fn grad_norm1(net: &Network, box_: &HyperBox, output: usize) -> Result<Interval, NetworkError> {
    if output >= net.output_count() {
        return Err(NetworkError::OutputIndex {
            index: output,
            count: net.output_count(),
        });
    }
    let rows = jacobian_rows(net, box_, &[output])?;
    Ok(norm1(&rows[0]))
}
