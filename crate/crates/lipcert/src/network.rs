//! Feedforward network data model, validation, JSON file format, and
//! real/interval forward evaluation.
//!
//! A network is a chain of affine layers with elementwise activations;
//! the final layer always carries the identity activation (a zero bias
//! vector is stored for uniformity). The interval forward pass is a
//! robust extension of the real one: it encloses every reachable output
//! over a hyperbox of inputs.

use crate::interval::{HyperBox, Interval};
use crate::round::{add_up, sub_down};
use serde::{Deserialize, Serialize};
use std::io::Read;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationKind {
    ReLU,
    Sigmoid,
    Tanh,
    Identity,
}

impl ActivationKind {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            ActivationKind::ReLU => x.max(0.0),
            ActivationKind::Sigmoid => sigmoid(x),
            ActivationKind::Tanh => x.tanh(),
            ActivationKind::Identity => x,
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Widens a round-to-nearest elementary-function value by `ulps` steps
/// on each side and clamps to the function's codomain. Conservative
/// substitute for a correctly rounded implementation.
pub(crate) fn widen_ulps(x: f64, ulps: u32, codomain: (f64, f64)) -> Interval {
    let mut lo = x;
    let mut hi = x;
    for _ in 0..ulps {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    Interval::new(lo.max(codomain.0), hi.min(codomain.1))
}

/// Monotone image of an activation over an interval, outward rounded.
pub fn interval_activation(kind: ActivationKind, z: &Interval) -> Interval {
    match kind {
        ActivationKind::Identity => *z,
        ActivationKind::ReLU => Interval::new(z.lo().max(0.0), z.hi().max(0.0)),
        ActivationKind::Sigmoid => {
            let lo = widen_ulps(sigmoid(z.lo()), 4, (0.0, 1.0));
            let hi = widen_ulps(sigmoid(z.hi()), 4, (0.0, 1.0));
            Interval::new(lo.lo(), hi.hi())
        }
        ActivationKind::Tanh => {
            let lo = widen_ulps(z.lo().tanh(), 4, (-1.0, 1.0));
            let hi = widen_ulps(z.hi().tanh(), 4, (-1.0, 1.0));
            Interval::new(lo.lo(), hi.hi())
        }
    }
}

/// One affine layer: `z = W a + b`, followed by the activation.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub activation: ActivationKind,
}

impl Layer {
    pub fn out_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn in_dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error at layer {layer}: {detail}")]
    Shape { layer: usize, detail: String },
    #[error("value error at layer {layer}: {detail}")]
    Value { layer: usize, detail: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("output index {index} out of range (outputs: {count})")]
    OutputIndex { index: usize, count: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A validated feedforward network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    input_dim: usize,
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Network, NetworkError> {
        if input_dim == 0 {
            return Err(NetworkError::Shape {
                layer: 0,
                detail: "input dimension must be positive".into(),
            });
        }
        if layers.is_empty() {
            return Err(NetworkError::Shape {
                layer: 0,
                detail: "network has no layers".into(),
            });
        }
        let mut prev = input_dim;
        for (idx, layer) in layers.iter().enumerate() {
            if layer.weights.is_empty() {
                return Err(NetworkError::Shape {
                    layer: idx,
                    detail: "empty weight matrix".into(),
                });
            }
            for row in &layer.weights {
                if row.len() != prev {
                    return Err(NetworkError::Shape {
                        layer: idx,
                        detail: format!("expected {} columns, got {}", prev, row.len()),
                    });
                }
            }
            if layer.biases.len() != layer.out_dim() {
                return Err(NetworkError::Shape {
                    layer: idx,
                    detail: format!(
                        "bias length {} does not match {} rows",
                        layer.biases.len(),
                        layer.out_dim()
                    ),
                });
            }
            let finite = layer
                .weights
                .iter()
                .flatten()
                .chain(&layer.biases)
                .all(|x| x.is_finite());
            if !finite {
                return Err(NetworkError::Value {
                    layer: idx,
                    detail: "non-finite weight or bias".into(),
                });
            }
            prev = layer.out_dim();
        }
        if layers.last().unwrap().activation != ActivationKind::Identity {
            return Err(NetworkError::Shape {
                layer: layers.len() - 1,
                detail: "final layer must have identity activation".into(),
            });
        }
        Ok(Network { input_dim, layers })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_count(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Round-to-nearest forward pass.
    pub fn eval_real(&self, x: &[f64]) -> Result<Vec<f64>, NetworkError> {
        if x.len() != self.input_dim {
            return Err(NetworkError::Dimension {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let mut a = x.to_vec();
        for layer in &self.layers {
            let mut next = Vec::with_capacity(layer.out_dim());
            for (row, &b) in layer.weights.iter().zip(&layer.biases) {
                let z = row.iter().zip(&a).fold(b, |acc, (&w, &v)| acc + w * v);
                next.push(layer.activation.apply(z));
            }
            a = next;
        }
        Ok(a)
    }

    /// Interval forward pass: encloses `eval_real` over every point of
    /// the box, componentwise.
    pub fn eval_interval(&self, box_: &HyperBox) -> Result<Vec<Interval>, NetworkError> {
        Ok(self.forward_intervals(box_)?.output)
    }

    /// Interval forward pass that also records the pre-activation
    /// enclosure of every non-final layer (needed for gradient bounds).
    pub(crate) fn forward_intervals(
        &self,
        box_: &HyperBox,
    ) -> Result<ForwardIntervals, NetworkError> {
        if box_.dims() != self.input_dim {
            return Err(NetworkError::Dimension {
                expected: self.input_dim,
                got: box_.dims(),
            });
        }
        let mut a: Vec<Interval> = box_.coords().to_vec();
        let mut pre_activations = Vec::with_capacity(self.layers.len().saturating_sub(1));
        for (idx, layer) in self.layers.iter().enumerate() {
            let mut z = Vec::with_capacity(layer.out_dim());
            for (row, &b) in layer.weights.iter().zip(&layer.biases) {
                let acc = row
                    .iter()
                    .zip(&a)
                    .fold(Interval::point(b), |acc, (&w, v)| acc.add(&v.scale(w)));
                z.push(acc);
            }
            let last = idx + 1 == self.layers.len();
            if !last {
                pre_activations.push(z.clone());
            }
            a = z
                .iter()
                .map(|zi| interval_activation(layer.activation, zi))
                .collect();
        }
        Ok(ForwardIntervals {
            pre_activations,
            output: a,
        })
    }

    /// The single-output network computing `N_i0(x) - N_i(x)`: identical
    /// to `self` except the final layer is the difference of the two
    /// output rows.
    pub fn difference_network(&self, i0: usize, i: usize) -> Result<Network, NetworkError> {
        let m = self.output_count();
        if i0 >= m {
            return Err(NetworkError::OutputIndex { index: i0, count: m });
        }
        if i >= m {
            return Err(NetworkError::OutputIndex { index: i, count: m });
        }
        if i0 == i {
            return Err(NetworkError::OutputIndex { index: i, count: m });
        }
        let mut layers = self.layers.clone();
        let last = layers.last_mut().unwrap();
        let row: Vec<f64> = last.weights[i0]
            .iter()
            .zip(&last.weights[i])
            .map(|(&a, &b)| a - b)
            .collect();
        let bias = last.biases[i0] - last.biases[i];
        last.weights = vec![row];
        last.biases = vec![bias];
        Network::new(self.input_dim, layers)
    }
}

/// Pre-activation enclosures per hidden layer plus the output enclosure.
pub(crate) struct ForwardIntervals {
    pub pre_activations: Vec<Vec<Interval>>,
    pub output: Vec<Interval>,
}

// --- file format ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LayerFile {
    weights: Vec<Vec<String>>,
    biases: Vec<String>,
    activation: ActivationKind,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    input_dim: usize,
    layers: Vec<LayerFile>,
}

fn parse_decimal(s: &str, layer: usize) -> Result<f64, NetworkError> {
    let v: f64 = s.parse().map_err(|_| NetworkError::Value {
        layer,
        detail: format!("not a decimal number: {s:?}"),
    })?;
    if !v.is_finite() {
        return Err(NetworkError::Value {
            layer,
            detail: format!("non-finite entry: {s:?}"),
        });
    }
    Ok(v)
}

/// Loads and validates a network from its JSON representation. All
/// numerics are decimal strings that round-trip binary64 exactly.
pub fn load_network<R: Read>(mut source: R) -> Result<Network, NetworkError> {
    let mut buf = String::new();
    source.read_to_string(&mut buf)?;
    let file: NetworkFile =
        serde_json::from_str(&buf).map_err(|e| NetworkError::Parse(e.to_string()))?;
    let layers = file
        .layers
        .into_iter()
        .enumerate()
        .map(|(idx, lf)| {
            let weights = lf
                .weights
                .iter()
                .map(|row| row.iter().map(|s| parse_decimal(s, idx)).collect())
                .collect::<Result<Vec<Vec<f64>>, _>>()?;
            let biases = lf
                .biases
                .iter()
                .map(|s| parse_decimal(s, idx))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok(Layer {
                weights,
                biases,
                activation: lf.activation,
            })
        })
        .collect::<Result<Vec<Layer>, NetworkError>>()?;
    Network::new(file.input_dim, layers)
}

/// Serializes a network to the JSON file format.
pub fn save_network(net: &Network) -> String {
    let file = NetworkFile {
        input_dim: net.input_dim(),
        layers: net
            .layers()
            .iter()
            .map(|l| LayerFile {
                weights: l
                    .weights
                    .iter()
                    .map(|row| row.iter().map(|w| format!("{w:?}")).collect())
                    .collect(),
                biases: l.biases.iter().map(|b| format!("{b:?}")).collect(),
                activation: l.activation,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("network serialization cannot fail")
}

// --- input regions -------------------------------------------------------

/// Where to certify: an inf-ball around a center, or an explicit box,
/// optionally clipped to a bounded input domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputRegion {
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        clip: Option<HyperBox>,
    },
    Box {
        #[serde(rename = "box")]
        region: HyperBox,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        clip: Option<HyperBox>,
    },
}

impl InputRegion {
    pub fn ball(center: Vec<f64>, radius: f64) -> InputRegion {
        assert!(radius >= 0.0, "negative radius");
        InputRegion::Ball {
            center,
            radius,
            clip: None,
        }
    }

    pub fn dims(&self) -> usize {
        match self {
            InputRegion::Ball { center, .. } => center.len(),
            InputRegion::Box { region, .. } => region.dims(),
        }
    }

    /// The derived hyperbox, outward rounded for balls, intersected
    /// with the clip domain when present.
    pub fn to_box(&self) -> HyperBox {
        let raw = match self {
            InputRegion::Ball { center, radius, .. } => HyperBox::new(
                center
                    .iter()
                    .map(|&c| Interval::new(sub_down(c, *radius), add_up(c, *radius)))
                    .collect(),
            ),
            InputRegion::Box { region, .. } => region.clone(),
        };
        let clip = match self {
            InputRegion::Ball { clip, .. } | InputRegion::Box { clip, .. } => clip,
        };
        match clip {
            Some(domain) => raw
                .intersect(domain)
                .expect("region does not meet its clip domain"),
            None => raw,
        }
    }
}
