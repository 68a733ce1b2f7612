//! Certification entry points: Lipschitz-constant enclosures for
//! regressor outputs, reachable-class over-approximation, and certified
//! robustness radii for classifiers via difference networks.

use crate::gradient::grad_norm1;
use crate::interval::{HyperBox, Interval};
use crate::maximize::{maximize, MaxParams, MaxResult, MaximizeError};
use crate::network::{InputRegion, Network, NetworkError};
use crate::round::div_down;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum LipschitzError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Maximize(#[from] MaximizeError),
    #[error("classifier analysis needs at least 2 outputs, network has {0}")]
    NotAClassifier(usize),
}

/// Guaranteed enclosure of a local Lipschitz constant (with respect to
/// the inf perturbation norm) plus the maximum-set boxes and trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// Report schema version.
    pub version: u32,
    pub network_sha256: String,
    pub region: InputRegion,
    pub output: usize,
    pub params: MaxParams,
    #[serde(flatten)]
    pub result: MaxResult,
    pub wall_ms: u64,
}

/// SHA-256 of the network's canonical JSON serialization.
pub fn network_digest(net: &Network) -> String {
    let json = crate::network::save_network(net);
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// Branch-and-bound enclosure of the local Lipschitz constant of output
/// `output` over `region`: the maximum of the Jacobian-row 1-norm.
pub fn lipschitz_enclosure(
    net: &Network,
    region: &InputRegion,
    output: usize,
    params: &MaxParams,
) -> Result<LipschitzReport, LipschitzError> {
    if region.dims() != net.input_dim() {
        return Err(NetworkError::Dimension {
            expected: net.input_dim(),
            got: region.dims(),
        }
        .into());
    }
    if output >= net.output_count() {
        return Err(NetworkError::OutputIndex {
            index: output,
            count: net.output_count(),
        }
        .into());
    }
    let start = Instant::now();
    let objective = |b: &HyperBox| grad_norm1(net, b, output).map_err(|e| e.to_string());
    let result = maximize(objective, &[region.to_box()], params)?;
    Ok(LipschitzReport {
        version: 1,
        network_sha256: network_digest(net),
        region: region.clone(),
        output,
        params: *params,
        result,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Over-approximation of the classes realized by some input in the box:
/// class `i` is possible iff its output enclosure reaches the best
/// guaranteed lower bound among all classes.
pub fn possible_classes(net: &Network, box_: &HyperBox) -> Result<BTreeSet<usize>, LipschitzError> {
    let outputs = net.eval_interval(box_)?;
    let best_lo = outputs.iter().map(Interval::lo).fold(f64::NEG_INFINITY, f64::max);
    Ok(outputs
        .iter()
        .enumerate()
        .filter(|(_, o)| o.hi() >= best_lo)
        .map(|(i, _)| i)
        .collect())
}

/// Per-competitor certification data for one classifier input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompetitorReport {
    pub class: usize,
    /// Enclosure of the margin `N_pred(x0) - N_class(x0)`.
    pub margin: Interval,
    /// Lipschitz enclosure of the difference network over the search ball.
    pub lipschitz: Interval,
    /// Certified radius contributed by this competitor.
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassRobustnessReport {
    pub input: Vec<f64>,
    pub predicted_class: usize,
    pub competitors: Vec<CompetitorReport>,
    /// Within this inf-radius of the input the argmax class cannot change.
    pub certified_radius: f64,
    /// Classes reachable anywhere in the search ball.
    pub possible_classes: BTreeSet<usize>,
    pub search_radius: f64,
}

/// Certified robustness radius at `x0`: the minimum over competitors of
/// margin lower bound divided by the certified Lipschitz upper bound of
/// the difference network over the search ball, clamped to the ball.
pub fn certified_radius(
    net: &Network,
    x0: &[f64],
    search_radius: f64,
    params: &MaxParams,
) -> Result<ClassRobustnessReport, LipschitzError> {
    let m = net.output_count();
    if m < 2 {
        return Err(LipschitzError::NotAClassifier(m));
    }
    let outputs = net.eval_real(x0)?;
    let predicted = outputs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();

    let region = InputRegion::ball(x0.to_vec(), search_radius);
    let point = HyperBox::point(x0);

    let mut competitors = Vec::with_capacity(m - 1);
    let mut radius = search_radius;
    for class in (0..m).filter(|&i| i != predicted) {
        let diff = net.difference_network(predicted, class)?;
        let margin = diff.eval_interval(&point)?[0];
        let lip = lipschitz_enclosure(&diff, &region, 0, params)?;
        let l_hi = lip.result.value.hi();
        let r = if margin.lo() <= 0.0 {
            // on (or indistinguishable from) the decision boundary
            0.0
        } else if l_hi <= 0.0 {
            // certifiably constant difference: safe across the whole ball
            search_radius
        } else {
            div_down(margin.lo(), l_hi).clamp(0.0, search_radius)
        };
        radius = radius.min(r);
        competitors.push(CompetitorReport {
            class,
            margin,
            lipschitz: lip.result.value,
            radius: r,
        });
    }

    let possible = possible_classes(net, &region.to_box())?;
    Ok(ClassRobustnessReport {
        input: x0.to_vec(),
        predicted_class: predicted,
        competitors,
        certified_radius: radius,
        possible_classes: possible,
        search_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{ActivationKind, Layer};
    use crate::testutil::zero_net;

    fn linear_classifier() -> Network {
        // N0(x) = x0, N1(x) = -x0 + 0.5 x1
        Network::new(
            2,
            vec![Layer {
                weights: vec![vec![1.0, 0.0], vec![-1.0, 0.5]],
                biases: vec![0.0, 0.0],
                activation: ActivationKind::Identity,
            }],
        )
        .unwrap()
    }

    #[test]
    fn linear_single_row_lipschitz_is_norm1_of_row() {
        let net = Network::new(
            3,
            vec![Layer {
                weights: vec![vec![1.5, -2.0, 0.25]],
                biases: vec![0.0],
                activation: ActivationKind::Identity,
            }],
        )
        .unwrap();
        let region = InputRegion::ball(vec![0.0, 0.0, 0.0], 1.0);
        let rep = lipschitz_enclosure(&net, &region, 0, &MaxParams::default()).unwrap();
        assert_eq!(rep.result.value, Interval::point(3.75));
        assert_eq!(rep.result.iterations, 1);
    }

    #[test]
    fn zero_net_enclosure_documents_dependency_overestimate() {
        let net = zero_net();
        let region = InputRegion::ball(vec![0.0], 1.0);
        let params = MaxParams {
            max_iterations: 10,
            ..MaxParams::default()
        };
        let rep = lipschitz_enclosure(&net, &region, 0, &params).unwrap();
        // true constant is 0; the dependency effect pins the hi at 1
        assert_eq!(rep.result.value.hi(), 1.0);
        assert!(rep.result.value.lo() >= 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let net = zero_net();
        let region = InputRegion::ball(vec![0.0, 0.0], 1.0);
        assert!(lipschitz_enclosure(&net, &region, 0, &MaxParams::default()).is_err());
    }

    #[test]
    fn separated_outputs_give_singleton_class_set() {
        let net = Network::new(
            1,
            vec![Layer {
                weights: vec![vec![0.0], vec![0.0]],
                biases: vec![0.0, 1.0],
                activation: ActivationKind::Identity,
            }],
        )
        .unwrap();
        let b = HyperBox::new(vec![Interval::new(-1.0, 1.0)]);
        let classes = possible_classes(&net, &b).unwrap();
        assert_eq!(classes, BTreeSet::from([1]));
    }

    #[test]
    fn crossing_outputs_give_both_classes() {
        // N0 = x, N1 = -x: they cross at 0
        let net = Network::new(
            1,
            vec![Layer {
                weights: vec![vec![1.0], vec![-1.0]],
                biases: vec![0.0, 0.0],
                activation: ActivationKind::Identity,
            }],
        )
        .unwrap();
        let b = HyperBox::new(vec![Interval::new(-1.0, 1.0)]);
        assert_eq!(possible_classes(&net, &b).unwrap(), BTreeSet::from([0, 1]));
        // away from the boundary the set is the singleton argmax
        let p = HyperBox::point(&[0.5]);
        assert_eq!(possible_classes(&net, &p).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn linear_radius_matches_closed_form() {
        let net = linear_classifier();
        // at x0 = (1, 0): margins N0-N1 = 2x0 - 0.5x1 = 2, row diff (2, -0.5)
        let rep = certified_radius(&net, &[1.0, 0.0], 10.0, &MaxParams::default()).unwrap();
        assert_eq!(rep.predicted_class, 0);
        let expected = 2.0 / 2.5;
        assert!((rep.certified_radius - expected).abs() <= 1e-12);
    }

    #[test]
    fn boundary_point_gets_zero_radius() {
        let net = linear_classifier();
        // x0 = (0, 0): both outputs 0, zero margin
        let rep = certified_radius(&net, &[0.0, 0.0], 1.0, &MaxParams::default()).unwrap();
        assert_eq!(rep.certified_radius, 0.0);
    }

    #[test]
    fn single_output_net_rejected() {
        let net = zero_net();
        assert!(matches!(
            certified_radius(&net, &[0.0], 1.0, &MaxParams::default()),
            Err(LipschitzError::NotAClassifier(1))
        ));
    }
}
