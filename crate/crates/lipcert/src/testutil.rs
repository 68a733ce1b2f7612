//! Small fixture networks shared across unit tests.

use crate::network::{ActivationKind, Layer, Network};

pub(crate) fn identity_net(n: usize) -> Network {
    let weights: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Network::new(
        n,
        vec![Layer {
            weights,
            biases: vec![0.0; n],
            activation: ActivationKind::Identity,
        }],
    )
    .unwrap()
}

/// ReLU(x) - ReLU(x): computes the constant zero function, but its
/// interval gradient enclosure on any box containing 0 is [-1, 1].
pub(crate) fn zero_net() -> Network {
    Network::new(
        1,
        vec![
            Layer {
                weights: vec![vec![1.0], vec![1.0]],
                biases: vec![0.0, 0.0],
                activation: ActivationKind::ReLU,
            },
            Layer {
                weights: vec![vec![1.0, -1.0]],
                biases: vec![0.0],
                activation: ActivationKind::Identity,
            },
        ],
    )
    .unwrap()
}

/// N(x) = ReLU(x): single neuron, single output.
pub(crate) fn relu_net() -> Network {
    Network::new(
        1,
        vec![
            Layer {
                weights: vec![vec![1.0]],
                biases: vec![0.0],
                activation: ActivationKind::ReLU,
            },
            Layer {
                weights: vec![vec![1.0]],
                biases: vec![0.0],
                activation: ActivationKind::Identity,
            },
        ],
    )
    .unwrap()
}
