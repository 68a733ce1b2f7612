//! Interval enclosure of the Clarke gradient via the hyperbox chain
//! rule, including the canonical dependency-problem network.

use lipcert::gradient::interval_jacobian;
use lipcert::interval::{HyperBox, Interval};
use lipcert::network::{ActivationKind, Layer, Network};

fn main() {
    // N(x) = ReLU(x) - ReLU(x): the constant zero function
    let zero = Network::new(
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
    .unwrap();

    let b = HyperBox::new(vec![Interval::new(-1.0, 1.0)]);
    let g = interval_jacobian(&zero, &b).unwrap();
    println!("zero network N(x) = ReLU(x) - ReLU(x) on [-1, 1]:");
    println!("  true gradient everywhere: 0");
    println!("  interval enclosure:       {}", g.jacobian.get(0, 0));
    println!("  (the chain rule treats both ReLU branches independently)");

    // away from the kink the enclosure is exact
    let b = HyperBox::new(vec![Interval::new(0.5, 1.0)]);
    let g = interval_jacobian(&zero, &b).unwrap();
    println!("\nsame network on [0.5, 1]: {}", g.jacobian.get(0, 0));

    // a smooth network: tanh derivative enclosed by unimodality
    let smooth = Network::new(
        1,
        vec![
            Layer {
                weights: vec![vec![2.0]],
                biases: vec![0.0],
                activation: ActivationKind::Tanh,
            },
            Layer {
                weights: vec![vec![1.0]],
                biases: vec![0.0],
                activation: ActivationKind::Identity,
            },
        ],
    )
    .unwrap();
    let b = HyperBox::new(vec![Interval::new(-0.25, 0.5)]);
    let g = interval_jacobian(&smooth, &b).unwrap();
    println!("\ntanh(2x) on [-0.25, 0.5]: {}", g.jacobian.get(0, 0));
    println!("1-norm enclosure:         {}", g.norm1_per_output[0]);
}
