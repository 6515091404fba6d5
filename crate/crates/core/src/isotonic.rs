//! Weighted isotonic regression and greatest convex minorant primitives.
//!
//! Two equivalent views of the same least-squares problem live here: the pool
//! adjacent violators algorithm ([`pava`]) fits a nondecreasing vector to a
//! weighted series directly, while [`gcm`] computes the greatest convex
//! minorant of a cumulative diagram whose left slopes are that fit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite series of values paired with strictly positive weights.
///
/// Construction validates the data, so fitting functions taking a
/// `WeightedSeries` cannot fail.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSeries {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSeries {
    /// Pairs `values` with `weights`.
    ///
    /// # Errors
    ///
    /// Rejects empty input, mismatched lengths, non-finite values, and
    /// weights that are not finite and positive.
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: weights.len(),
            });
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
        }
        for (index, w) in weights.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeight { index });
            }
        }
        Ok(Self { values, weights })
    }

    /// A series in which every observation carries unit weight.
    pub fn unweighted(values: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; values.len()];
        Self::new(values, weights)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Least-squares nondecreasing fit of a weighted series.
///
/// Runs the pool adjacent violators algorithm in one left-to-right pass:
/// each input starts its own block, and adjacent blocks merge into their
/// pooled weighted mean while they are out of order. The output is exactly
/// nondecreasing (the merge condition enforces it, no tolerance involved)
/// and preserves the weighted mean of the input.
pub fn pava(series: &WeightedSeries) -> Vec<f64> {
    let mut fit = Fit::with_capacity(series.len());
    fit.run(series.values(), series.weights());
    fit.expand()
}

/// Block state of a single PAVA pass, reusable across calls.
///
/// The hot sampling paths fit one series per Monte Carlo draw; keeping the
/// block buffers alive avoids a pair of allocations per draw.
#[derive(Debug, Default)]
pub(crate) struct Fit {
    mean: Vec<f64>,
    weight: Vec<f64>,
    count: Vec<usize>,
}

impl Fit {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            mean: Vec::with_capacity(n),
            weight: Vec::with_capacity(n),
            count: Vec::with_capacity(n),
        }
    }

    pub(crate) fn run(&mut self, values: &[f64], weights: &[f64]) {
        self.mean.clear();
        self.weight.clear();
        self.count.clear();
        for (v, w) in values.iter().zip(weights) {
            self.mean.push(*v);
            self.weight.push(*w);
            self.count.push(1);
            while self.mean.len() > 1 {
                let top = self.mean.len() - 1;
                if self.mean[top - 1] <= self.mean[top] {
                    break;
                }
                let m = self.mean.pop().unwrap();
                let w = self.weight.pop().unwrap();
                let c = self.count.pop().unwrap();
                let tot = self.weight[top - 1] + w;
                self.mean[top - 1] = (self.weight[top - 1] * self.mean[top - 1] + w * m) / tot;
                self.weight[top - 1] = tot;
                self.count[top - 1] += c;
            }
        }
    }

    /// Unit-weight pass; weights are block lengths.
    pub(crate) fn run_unit(&mut self, values: &[f64]) {
        self.mean.clear();
        self.weight.clear();
        self.count.clear();
        for v in values {
            self.mean.push(*v);
            self.count.push(1);
            while self.mean.len() > 1 {
                let top = self.mean.len() - 1;
                if self.mean[top - 1] <= self.mean[top] {
                    break;
                }
                let m = self.mean.pop().unwrap();
                let c = self.count.pop().unwrap();
                let (c0, c1) = (self.count[top - 1] as f64, c as f64);
                self.mean[top - 1] = (c0 * self.mean[top - 1] + c1 * m) / (c0 + c1);
                self.count[top - 1] += c;
            }
        }
    }

    pub(crate) fn expand(&self) -> Vec<f64> {
        let total: usize = self.count.iter().sum();
        let mut out = Vec::with_capacity(total);
        for (m, c) in self.mean.iter().zip(&self.count) {
            out.extend(core::iter::repeat_n(*m, *c));
        }
        out
    }

    /// Fitted value at position `index` of the original series.
    pub(crate) fn value_at(&self, index: usize) -> f64 {
        let mut end = 0;
        for (m, c) in self.mean.iter().zip(&self.count) {
            end += c;
            if index < end {
                return *m;
            }
        }
        unreachable!("index {index} beyond the fitted series");
    }
}

/// A planar point set with strictly increasing abscissas.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarDiagram {
    points: Vec<(f64, f64)>,
}

impl PlanarDiagram {
    /// Validates a diagram: at least two points, all finite, `x` strictly
    /// increasing.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegenerateDiagram);
        }
        for (index, (x, y)) in points.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::NonFiniteValue { index });
            }
        }
        for index in 1..points.len() {
            if points[index].0 <= points[index - 1].0 {
                return Err(Error::NonIncreasingAbscissa { index });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// The greatest convex minorant of a diagram, stored by its breakpoints.
///
/// Breakpoints are a subset of the diagram's points (the minorant touches the
/// diagram at each of them), and the slopes of consecutive segments are
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexMinorant {
    breakpoints: Vec<(f64, f64)>,
}

impl ConvexMinorant {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Slope of the minorant immediately to the left of `x`.
    ///
    /// # Errors
    ///
    /// The left slope exists only for `x` in `(x_first, x_last]`; anything
    /// outside that half-open range is rejected.
    pub fn left_slope(&self, x: f64) -> Result<f64> {
        let first = self.breakpoints[0].0;
        let last = self.breakpoints[self.breakpoints.len() - 1].0;
        if !x.is_finite() || x <= first || x > last {
            return Err(Error::SlopeUndefined { x });
        }
        // First breakpoint with abscissa >= x ends the segment containing x.
        let i = self.breakpoints.partition_point(|p| p.0 < x);
        let (x0, y0) = self.breakpoints[i - 1];
        let (x1, y1) = self.breakpoints[i];
        Ok((y1 - y0) / (x1 - x0))
    }
}

/// Greatest convex minorant of `diagram`.
///
/// Lower convex hull by a monotone chain: a candidate breakpoint is dropped
/// while it lies on or above the chord joining its neighbors. The orientation
/// test uses the cross product of the two chord vectors, so no slope division
/// is performed; collinear points are dropped, which keeps segment slopes
/// strictly increasing.
pub fn gcm(diagram: &PlanarDiagram) -> ConvexMinorant {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(diagram.points().len());
    for &(x, y) in diagram.points() {
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    ConvexMinorant { breakpoints: hull }
}

/// Slope of `minorant` immediately to the left of `x`.
pub fn left_slope(minorant: &ConvexMinorant, x: f64) -> Result<f64> {
    minorant.left_slope(x)
}
