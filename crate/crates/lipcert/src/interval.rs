//! Outward-rounded interval arithmetic over binary64 endpoints, plus
//! hyperboxes and interval matrices.
//!
//! Every operation returns an interval that contains the exact real
//! image set of its operands. Endpoints are correctly rounded in the
//! outward direction (see [`crate::round`]), so results are never more
//! than one ulp wider per endpoint than the tightest representable
//! enclosure. All values are immutable and all operations are pure.

use crate::round::{add_down, add_up, mul_down, mul_up, sub_down, sub_up};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A closed real interval `[lo, hi]` with binary64 endpoints.
///
/// Degenerate (point) intervals are permitted. An infinite endpoint
/// marks the unbounded element; it never arises from arithmetic on
/// finite operands except through overflow, which callers should treat
/// as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    /// The bottom element: the whole real line.
    pub const UNBOUNDED: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Builds `[lo, hi]`. Panics if `lo > hi` or an endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo.is_infinite() || self.hi.is_infinite()
    }

    /// Upper bound on the diameter `hi - lo`.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Closed-interval membership `lo <= t <= hi`.
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// `self` is a subset of `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, other.hi),
            hi: sub_up(self.hi, other.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Min/max over the four endpoint products, each correctly rounded
    /// in its own direction.
    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = (self.lo, self.hi);
        let (c, d) = (other.lo, other.hi);
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval { lo, hi }
    }

    pub fn scale(&self, s: f64) -> Interval {
        if s >= 0.0 {
            Interval {
                lo: mul_down(s, self.lo),
                hi: mul_up(s, self.hi),
            }
        } else {
            Interval {
                lo: mul_down(s, self.hi),
                hi: mul_up(s, self.lo),
            }
        }
    }

    /// Exact image of the absolute value.
    pub fn abs(&self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if self.contains(0.0) {
            Interval { lo: 0.0, hi: a.max(b) }
        } else {
            Interval { lo: a.min(b), hi: a.max(b) }
        }
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Midpoint in round-to-nearest; always lands inside the interval.
    pub fn midpoint(&self) -> f64 {
        let m = (self.lo + self.hi) / 2.0;
        m.clamp(self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 17 significant decimal digits: enough to round-trip binary64
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

// Endpoints serialize as shortest round-trip decimal strings so the
// JSON form is bit-exact across implementations.
#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        IntervalRepr {
            lo: format!("{:?}", self.lo),
            hi: format!("{:?}", self.hi),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = IntervalRepr::deserialize(deserializer)?;
        let lo: f64 = repr.lo.parse().map_err(D::Error::custom)?;
        let hi: f64 = repr.hi.parse().map_err(D::Error::custom)?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(D::Error::custom(format!(
                "invalid interval [{}, {}]",
                repr.lo, repr.hi
            )));
        }
        Ok(Interval { lo, hi })
    }
}

/// A vector of intervals: an axis-aligned box in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperBox {
    coords: Vec<Interval>,
}

impl HyperBox {
    pub fn new(coords: Vec<Interval>) -> HyperBox {
        assert!(!coords.is_empty(), "zero-dimensional hyperbox");
        HyperBox { coords }
    }

    /// The point box `{x}`.
    pub fn point(x: &[f64]) -> HyperBox {
        HyperBox::new(x.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Interval] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Interval {
        &self.coords[i]
    }

    /// Max coordinate diameter.
    pub fn width(&self) -> f64 {
        self.coords.iter().map(|c| c.width()).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.dims() == x.len() && self.coords.iter().zip(x).all(|(c, &v)| c.contains(v))
    }

    pub fn subset_of(&self, other: &HyperBox) -> bool {
        self.dims() == other.dims()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.subset_of(b))
    }

    /// Coordinatewise interval hull.
    pub fn hull(&self, other: &HyperBox) -> HyperBox {
        assert_eq!(self.dims(), other.dims(), "hull dimension mismatch");
        HyperBox::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.hull(b))
                .collect(),
        )
    }

    pub fn intersect(&self, other: &HyperBox) -> Option<HyperBox> {
        assert_eq!(self.dims(), other.dims(), "intersect dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(HyperBox::new)
    }

    /// Splits every non-degenerate coordinate at its midpoint, yielding
    /// up to `2^n` children whose union is exactly the parent. Adjacent
    /// children share the midpoint endpoint; degenerate coordinates are
    /// kept as-is rather than duplicating children.
    pub fn bisect(&self) -> Vec<HyperBox> {
        let halves: Vec<Vec<Interval>> = self
            .coords
            .iter()
            .map(|c| {
                let m = c.midpoint();
                if m == c.lo() || m == c.hi() {
                    vec![*c]
                } else {
                    vec![Interval::new(c.lo(), m), Interval::new(m, c.hi())]
                }
            })
            .collect();
        let mut children = vec![Vec::with_capacity(self.dims())];
        for options in &halves {
            children = children
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(|h| {
                        let mut next = prefix.clone();
                        next.push(*h);
                        next
                    })
                })
                .collect();
        }
        children.into_iter().map(HyperBox::new).collect()
    }
}

/// Outward-rounded sum of the coordinatewise absolute values:
/// the 1-norm of a hyperbox seen as an interval vector.
pub fn box_norm1(b: &HyperBox) -> Interval {
    b.coords()
        .iter()
        .fold(Interval::ZERO, |acc, c| acc.add(&c.abs()))
}

/// 1-norm of an interval row vector (same reduction as [`box_norm1`]).
pub fn norm1(row: &[Interval]) -> Interval {
    row.iter().fold(Interval::ZERO, |acc, c| acc.add(&c.abs()))
}

/// A dense matrix of intervals, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

/// Shape mismatch in an interval matrix operation.
#[derive(Debug, thiserror::Error)]
#[error("shape mismatch: {0}")]
pub struct ShapeError(pub String);

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Interval>) -> IntervalMatrix {
        assert_eq!(rows * cols, entries.len(), "entry count does not match shape");
        IntervalMatrix { rows, cols, entries }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> IntervalMatrix {
        IntervalMatrix::new(rows, cols, data.iter().map(|&x| Interval::point(x)).collect())
    }

    pub fn identity(n: usize) -> IntervalMatrix {
        let mut entries = vec![Interval::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Interval::ONE;
        }
        IntervalMatrix::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Interval {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product with outward-rounded interval dot products.
    pub fn mul_vec(&self, v: &[Interval]) -> Result<Vec<Interval>, ShapeError> {
        if v.len() != self.cols {
            return Err(ShapeError(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Interval::ZERO, |acc, (a, x)| acc.add(&a.mul(x)))
            })
            .collect())
    }

    /// Matrix product; every entry contains each real product with
    /// entries selected from the operand intervals.
    pub fn mul_mat(&self, other: &IntervalMatrix) -> Result<IntervalMatrix, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Interval::ZERO;
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Ok(IntervalMatrix::new(self.rows, other.cols, entries))
    }
}
