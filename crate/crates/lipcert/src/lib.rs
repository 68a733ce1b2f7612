//! Validated local Lipschitz-constant estimation for feedforward
//! networks, built on outward-rounded interval arithmetic.
//!
//! The pipeline: [`interval`] provides correctly rounded interval
//! arithmetic and hyperboxes; [`network`] models and evaluates
//! feedforward networks with guaranteed output enclosures; [`gradient`]
//! encloses the Clarke gradient over a box via the hyperbox chain rule;
//! [`maximize`] runs a branch-and-bound loop that simultaneously
//! encloses the maximum value and maximum set of any sound interval
//! objective; [`lipschitz`] composes these into Lipschitz enclosures,
//! certified classifier robustness radii, and reachable-class sets.
//!
//! Every numeric claim produced by this crate is an enclosure: the true
//! mathematical value is guaranteed to lie inside the reported interval,
//! with all floating-point rounding accounted for.

pub mod cli;
pub mod gradient;
pub mod interval;
pub mod lipschitz;
pub mod maximize;
pub mod network;
pub mod round;
#[cfg(test)]
pub(crate) mod testutil;

pub use gradient::{activation_grad_interval, grad_norm1, interval_jacobian, GradEnclosure};
pub use interval::{box_norm1, norm1, HyperBox, Interval, IntervalMatrix};
pub use lipschitz::{
    certified_radius, lipschitz_enclosure, network_digest, possible_classes,
    ClassRobustnessReport, CompetitorReport, LipschitzError, LipschitzReport,
};
pub use maximize::{maximize, MaxParams, MaxResult, MaximizeError, StopReason, TraceRow};
pub use network::{
    interval_activation, load_network, save_network, ActivationKind, InputRegion, Layer, Network,
    NetworkError,
};
