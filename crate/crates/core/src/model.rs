//! The grid observation model and the monotone maximum likelihood estimator.
//!
//! Subjects are inspected once each at a time drawn from a regular grid
//! `t_i = a + i*delta`, `i = 1..=K`, and only the indicator of the event
//! having occurred by the inspection time is recorded. The sufficient
//! statistics are the per-point inspection counts `N_i` and response sums
//! `Z_i`; the maximum likelihood estimator of the event-time distribution
//! restricted to the grid is the weighted isotonic regression of the
//! response means `Z_i / N_i` with weights `N_i`, extended to a
//! right-continuous step function.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotonic::{gcm, pava, PlanarDiagram, WeightedSeries};

/// Relative tolerance (in units of `delta`) for matching times to grid points.
const GRID_REL_TOL: f64 = 1e-9;

/// A regular inspection grid `t_i = a + i*delta` inside `[a, b]`.
///
/// `K = floor((b - a) / delta)` points lie in the interval; the left endpoint
/// `a` itself is not a grid point. The floor is taken with a relative
/// tolerance of 1e-9 so that spacings intended to divide the interval
/// exactly (0.2 into [0, 1], say) are not truncated by representation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    a: f64,
    b: f64,
    delta: f64,
    k: usize,
}

impl GridSpec {
    /// Grid over `[a, b]` with spacing `delta`.
    ///
    /// # Errors
    ///
    /// The interval must be finite and nonempty, the spacing positive and
    /// finite, and at least one grid point must fall inside the interval.
    pub fn from_spacing(a: f64, b: f64, delta: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidInterval);
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidSpacing);
        }
        let k = ((b - a) / delta + GRID_REL_TOL).floor() as usize;
        if k < 1 {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { a, b, delta, k })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of grid points.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The `i`-th grid point, `1 <= i <= K`. Index 0 maps to `a` itself,
    /// which is a valid time but not a grid point.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i <= self.k);
        self.a + i as f64 * self.delta
    }

    /// All grid points `t_1..t_K` in order.
    pub fn points(&self) -> Vec<f64> {
        (1..=self.k).map(|i| self.point(i)).collect()
    }

    fn tol(&self) -> f64 {
        GRID_REL_TOL * self.delta
    }

    /// Number of grid points at or below `t`, i.e. the step index active at
    /// `t`. Times within tolerance of a grid point count as that point.
    ///
    /// # Errors
    ///
    /// `t` must lie inside `[a, b]` (up to tolerance).
    pub fn locate(&self, t: f64) -> Result<usize> {
        let tol = self.tol();
        if !t.is_finite() || t < self.a - tol || t > self.b.max(self.point(self.k)) + tol {
            return Err(Error::OutsideInterval { t });
        }
        let raw = (t - self.a) / self.delta;
        let near = raw.round();
        if near >= 0.0 && near <= self.k as f64 && (t - (self.a + near * self.delta)).abs() <= tol {
            return Ok(near as usize);
        }
        let mut i = raw.floor().max(0.0) as usize;
        i = i.min(self.k);
        while i > 0 && self.point(i) > t {
            i -= 1;
        }
        while i < self.k && self.point(i + 1) <= t {
            i += 1;
        }
        Ok(i)
    }

    /// Index of the grid point matching `x` within tolerance, if any.
    pub fn snap(&self, x: f64) -> Option<usize> {
        if !x.is_finite() {
            return None;
        }
        let near = ((x - self.a) / self.delta).round();
        if near < 1.0 || near > self.k as f64 {
            return None;
        }
        let i = near as usize;
        ((x - self.point(i)).abs() <= self.tol()).then_some(i)
    }
}

/// Raw current status records: inspection times with event indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    times: Vec<f64>,
    events: Vec<bool>,
}

impl ObservationSet {
    /// # Errors
    ///
    /// Rejects empty input, mismatched lengths, and non-finite times.
    pub fn new(times: Vec<f64>, events: Vec<bool>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyObservations);
        }
        if times.len() != events.len() {
            return Err(Error::LengthMismatch {
                left: times.len(),
                right: events.len(),
            });
        }
        for (index, t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
        }
        Ok(Self { times, events })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }
}

/// Sufficient statistics on a grid: inspection counts and response sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedCounts {
    grid: GridSpec,
    counts: Vec<u64>,
    responses: Vec<u64>,
}

impl BinnedCounts {
    /// Assembles counts directly, validating shape and `Z_i <= N_i`.
    pub fn from_parts(grid: GridSpec, counts: Vec<u64>, responses: Vec<u64>) -> Result<Self> {
        if counts.len() != grid.k() {
            return Err(Error::LengthMismatch {
                left: counts.len(),
                right: grid.k(),
            });
        }
        if responses.len() != counts.len() {
            return Err(Error::LengthMismatch {
                left: responses.len(),
                right: counts.len(),
            });
        }
        for (index, (n, z)) in counts.iter().zip(&responses).enumerate() {
            if z > n {
                return Err(Error::ResponseExceedsCount { index });
            }
        }
        Ok(Self {
            grid,
            counts,
            responses,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Inspection counts `N_1..N_K`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Response sums `Z_1..Z_K`.
    pub fn responses(&self) -> &[u64] {
        &self.responses
    }

    /// Total number of observations.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Response mean at 1-based grid index `i`; `None` for an empty bin.
    pub fn response_mean(&self, i: usize) -> Option<f64> {
        let n = self.counts[i - 1];
        (n > 0).then(|| self.responses[i - 1] as f64 / n as f64)
    }

    /// Number of grid points with no inspections.
    pub fn empty_bins(&self) -> usize {
        self.counts.iter().filter(|n| **n == 0).count()
    }
}

/// Tallies observations onto the grid.
///
/// Each inspection time must coincide with a grid point up to the grid's
/// matching tolerance; anything else is a data error, not a rounding problem.
pub fn bin(grid: &GridSpec, observations: &ObservationSet) -> Result<BinnedCounts> {
    let mut counts = alloc::vec![0u64; grid.k()];
    let mut responses = alloc::vec![0u64; grid.k()];
    for (index, (x, y)) in observations
        .times()
        .iter()
        .zip(observations.events())
        .enumerate()
    {
        let i = grid.snap(*x).ok_or(Error::OffGrid { index, x: *x })?;
        counts[i - 1] += 1;
        responses[i - 1] += u64::from(*y);
    }
    Ok(BinnedCounts {
        grid: *grid,
        counts,
        responses,
    })
}

/// The fitted distribution as a right-continuous step function.
///
/// `F(t) = 0` on `[a, t_1)`, `F(t) = levels[i-1]` on `[t_i, t_{i+1})`, and
/// `F(t) = levels[K-1]` on `[t_K, b]`. Levels are nondecreasing and lie in
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEstimate {
    grid: GridSpec,
    levels: Vec<f64>,
}

impl StepEstimate {
    /// Assembles a step estimate from external data, validating monotonicity
    /// and range.
    pub fn from_parts(grid: GridSpec, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != grid.k() {
            return Err(Error::LengthMismatch {
                left: levels.len(),
                right: grid.k(),
            });
        }
        for (index, l) in levels.iter().enumerate() {
            if !(l.is_finite() && (0.0..=1.0).contains(l)) {
                return Err(Error::NonFiniteValue { index });
            }
        }
        for pair in levels.windows(2) {
            if pair[0] > pair[1] {
                return Err(Error::NoData);
            }
        }
        Ok(Self { grid, levels })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Fitted levels at `t_1..t_K`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Level at 1-based grid index `i`; index 0 is the value below `t_1`.
    pub fn level(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.levels[i - 1]
        }
    }

    /// Evaluates the step function at `t` in `[a, b]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.level(self.grid.locate(t)?))
    }
}

/// Evaluates `estimate` at `t`; the free-function form of [`StepEstimate::eval`].
pub fn eval_step(estimate: &StepEstimate, t: f64) -> Result<f64> {
    estimate.eval(t)
}

fn expand_levels(grid: &GridSpec, counts: &[u64], fitted: &[f64]) -> StepEstimate {
    let mut levels = Vec::with_capacity(grid.k());
    let mut carry = 0.0;
    let mut next = 0;
    for n in counts {
        if *n > 0 {
            carry = fitted[next].clamp(0.0, 1.0);
            next += 1;
        }
        levels.push(carry);
    }
    StepEstimate {
        grid: *grid,
        levels,
    }
}

/// Maximum likelihood estimator of the event-time distribution on the grid.
///
/// Weighted isotonic regression of the response means with the counts as
/// weights. Grid points with no inspections contribute nothing to the
/// likelihood; they are dropped from the regression and the neighboring
/// level is carried across (zero before the first inspected point).
///
/// # Errors
///
/// At least one observation is required.
pub fn npmle(binned: &BinnedCounts) -> Result<StepEstimate> {
    let (means, weights) = nonempty_means(binned)?;
    let series = WeightedSeries::new(means, weights).expect("nonempty validated series");
    let fitted = pava(&series);
    let empty = binned.empty_bins();
    if empty > 0 {
        log::warn!("npmle: {empty} empty grid bins dropped; levels carried across");
    }
    Ok(expand_levels(binned.grid(), binned.counts(), &fitted))
}

/// The same estimator computed through its convex minorant characterization.
///
/// The cumulative diagram of inspection mass against response mass (one
/// point per inspected grid point, plus the origin) has a greatest convex
/// minorant whose left slopes at the diagram abscissas are exactly the
/// isotonic fit. Kept as an independent route for cross-checking [`npmle`].
pub fn npmle_via_gcm(binned: &BinnedCounts) -> Result<StepEstimate> {
    let (means, weights) = nonempty_means(binned)?;
    let n = binned.n() as f64;
    let mut points = Vec::with_capacity(means.len() + 1);
    let mut abscissas = Vec::with_capacity(means.len());
    points.push((0.0, 0.0));
    let (mut g_cum, mut v_cum) = (0.0, 0.0);
    for (mean, w) in means.iter().zip(&weights) {
        g_cum += w / n;
        v_cum += w * mean / n;
        abscissas.push(g_cum);
        points.push((g_cum, v_cum));
    }
    let minorant = gcm(&PlanarDiagram::new(points).expect("cumulative diagram is valid"));
    let fitted: Vec<f64> = abscissas
        .iter()
        .map(|x| {
            minorant
                .left_slope(*x)
                .expect("diagram abscissas lie in range")
        })
        .collect();
    Ok(expand_levels(binned.grid(), binned.counts(), &fitted))
}

fn nonempty_means(binned: &BinnedCounts) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut means = Vec::with_capacity(binned.grid().k());
    let mut weights = Vec::with_capacity(binned.grid().k());
    for (n, z) in binned.counts().iter().zip(binned.responses()) {
        if *n > 0 {
            means.push(*z as f64 / *n as f64);
            weights.push(*n as f64);
        }
    }
    if means.is_empty() {
        return Err(Error::NoData);
    }
    Ok((means, weights))
}

/// Whether the raw response means are already nondecreasing across inspected
/// grid points. When they are, the isotonic fit coincides with the naive
/// pointwise means.
pub fn naive_is_monotone(binned: &BinnedCounts) -> bool {
    let mut prev = f64::NEG_INFINITY;
    for i in 1..=binned.grid().k() {
        if let Some(mean) = binned.response_mean(i) {
            if mean < prev {
                return false;
            }
            prev = mean;
        }
    }
    true
}

/// A point of interest bracketed by its neighboring grid points.
///
/// `l` is the largest grid index with `t_l <= x0`, `r = l + 1`, and `rho` is
/// the relative position of `x0` inside `[t_l, t_r]` (zero when `x0` is
/// itself a grid point).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub l: usize,
    pub r: usize,
    pub rho: f64,
}

/// Brackets `x0` between grid points.
///
/// # Errors
///
/// Requires `t_1 <= x0 < t_K`: both neighbors must exist.
pub fn locate_anchor(grid: &GridSpec, x0: f64) -> Result<Anchor> {
    let l = grid
        .locate(x0)
        .map_err(|_| Error::AnchorOutsideGrid { x0 })?;
    if l < 1 || l >= grid.k() {
        return Err(Error::AnchorOutsideGrid { x0 });
    }
    let t_l = grid.point(l);
    let t_r = grid.point(l + 1);
    let rho = if (x0 - t_l).abs() <= GRID_REL_TOL * grid.delta() {
        0.0
    } else {
        ((x0 - t_l) / (t_r - t_l)).clamp(0.0, 1.0)
    };
    Ok(Anchor { l, r: l + 1, rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid01(delta: f64) -> GridSpec {
        GridSpec::from_spacing(0.0, 1.0, delta).unwrap()
    }

    #[test]
    fn grid_point_count_survives_representation_error() {
        assert_eq!(grid01(0.2).k(), 5);
        assert_eq!(grid01(0.05).k(), 20);
        assert_eq!(grid01(0.01).k(), 100);
        assert_eq!(GridSpec::from_spacing(0.0, 2.0, 0.3).unwrap().k(), 6);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert_eq!(
            GridSpec::from_spacing(1.0, 1.0, 0.1).unwrap_err(),
            Error::InvalidInterval
        );
        assert_eq!(
            GridSpec::from_spacing(0.0, 1.0, 0.0).unwrap_err(),
            Error::InvalidSpacing
        );
        assert_eq!(
            GridSpec::from_spacing(0.0, 1.0, -0.5).unwrap_err(),
            Error::InvalidSpacing
        );
        assert_eq!(
            GridSpec::from_spacing(0.0, 0.1, 0.5).unwrap_err(),
            Error::EmptyGrid
        );
    }

    #[test]
    fn locate_honors_right_continuity_at_grid_points() {
        let g = grid01(0.1);
        assert_eq!(g.locate(0.0).unwrap(), 0);
        assert_eq!(g.locate(0.05).unwrap(), 0);
        assert_eq!(g.locate(0.1).unwrap(), 1);
        assert_eq!(g.locate(0.3).unwrap(), 3);
        assert_eq!(g.locate(0.35).unwrap(), 3);
        assert_eq!(g.locate(1.0).unwrap(), 10);
        assert!(g.locate(-0.01).is_err());
        assert!(g.locate(1.01).is_err());
    }

    #[test]
    fn snap_accepts_only_grid_points() {
        let g = grid01(0.1);
        assert_eq!(g.snap(0.3), Some(3));
        assert_eq!(g.snap(0.3 + 1e-12), Some(3));
        assert_eq!(g.snap(0.0), None);
        assert_eq!(g.snap(0.31), None);
        assert_eq!(g.snap(1.2), None);
    }

    #[test]
    fn binning_tallies_counts_and_responses() {
        let g = grid01(0.5);
        let obs =
            ObservationSet::new(vec![0.5, 1.0, 0.5, 1.0], vec![true, true, false, true]).unwrap();
        let binned = bin(&g, &obs).unwrap();
        assert_eq!(binned.counts(), &[2, 2]);
        assert_eq!(binned.responses(), &[1, 2]);
        assert_eq!(binned.n(), 4);
    }

    #[test]
    fn binning_rejects_off_grid_times() {
        let g = grid01(0.5);
        let obs = ObservationSet::new(vec![0.5, 0.7], vec![true, false]).unwrap();
        assert_eq!(
            bin(&g, &obs).unwrap_err(),
            Error::OffGrid { index: 1, x: 0.7 }
        );
    }

    #[test]
    fn mle_pools_the_violation() {
        let g = GridSpec::from_spacing(0.0, 0.8, 0.25).unwrap();
        let binned = BinnedCounts::from_parts(g, vec![2, 2, 2], vec![0, 2, 1]).unwrap();
        let fit = npmle(&binned).unwrap();
        let want = [0.0, 0.75, 0.75];
        for (l, w) in fit.levels().iter().zip(&want) {
            assert!((l - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn mle_carries_levels_across_empty_bins() {
        let g = GridSpec::from_spacing(0.0, 0.8, 0.25).unwrap();
        let binned = BinnedCounts::from_parts(g, vec![2, 0, 2], vec![1, 0, 2]).unwrap();
        let fit = npmle(&binned).unwrap();
        assert_eq!(fit.levels(), &[0.5, 0.5, 1.0]);
        assert_eq!(binned.empty_bins(), 1);

        let binned = BinnedCounts::from_parts(g, vec![0, 2, 2], vec![0, 1, 2]).unwrap();
        let fit = npmle(&binned).unwrap();
        assert_eq!(fit.levels(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn mle_requires_data() {
        let g = GridSpec::from_spacing(0.0, 0.8, 0.25).unwrap();
        let binned = BinnedCounts::from_parts(g, vec![0, 0, 0], vec![0, 0, 0]).unwrap();
        assert_eq!(npmle(&binned).unwrap_err(), Error::NoData);
    }

    #[test]
    fn gcm_route_agrees_on_the_pooled_example() {
        let g = GridSpec::from_spacing(0.0, 0.8, 0.25).unwrap();
        let binned = BinnedCounts::from_parts(g, vec![2, 2, 2], vec![0, 2, 1]).unwrap();
        let a = npmle(&binned).unwrap();
        let b = npmle_via_gcm(&binned).unwrap();
        for (x, y) in a.levels().iter().zip(b.levels()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn step_evaluation_is_right_continuous_with_zero_head() {
        let g = grid01(0.25);
        let est = StepEstimate::from_parts(g, vec![0.1, 0.4, 0.4, 0.9]).unwrap();
        assert_eq!(est.eval(0.0).unwrap(), 0.0);
        assert_eq!(est.eval(0.2).unwrap(), 0.0);
        assert_eq!(est.eval(0.25).unwrap(), 0.1);
        assert_eq!(est.eval(0.3).unwrap(), 0.1);
        assert_eq!(est.eval(0.5).unwrap(), 0.4);
        assert_eq!(est.eval(1.0).unwrap(), 0.9);
        assert!(est.eval(1.5).is_err());
    }

    #[test]
    fn step_construction_validates_levels() {
        let g = grid01(0.5);
        assert!(StepEstimate::from_parts(g, vec![0.5, 0.2]).is_err());
        assert!(StepEstimate::from_parts(g, vec![0.5, 1.2]).is_err());
        assert!(StepEstimate::from_parts(g, vec![0.5]).is_err());
    }

    #[test]
    fn anchor_snaps_to_grid_points() {
        let g = grid01(0.1);
        let a = locate_anchor(&g, 0.5).unwrap();
        assert_eq!((a.l, a.r), (5, 6));
        assert_eq!(a.rho, 0.0);
        let a = locate_anchor(&g, 0.55).unwrap();
        assert_eq!((a.l, a.r), (5, 6));
        assert!((a.rho - 0.5).abs() < 1e-9);
        assert!(locate_anchor(&g, 0.05).is_err());
        assert!(locate_anchor(&g, 1.0).is_err());
    }

    #[test]
    fn naive_monotonicity_ignores_empty_bins() {
        let g = GridSpec::from_spacing(0.0, 0.8, 0.25).unwrap();
        let ordered = BinnedCounts::from_parts(g, vec![2, 0, 2], vec![1, 0, 2]).unwrap();
        assert!(naive_is_monotone(&ordered));
        let violated = BinnedCounts::from_parts(g, vec![2, 2, 2], vec![2, 1, 2]).unwrap();
        assert!(!naive_is_monotone(&violated));
        let single = BinnedCounts::from_parts(g, vec![0, 2, 0], vec![0, 1, 0]).unwrap();
        assert!(naive_is_monotone(&single));
    }

    #[test]
    fn counts_validation_rejects_excess_responses() {
        let g = grid01(0.5);
        assert_eq!(
            BinnedCounts::from_parts(g, vec![2, 2], vec![3, 0]).unwrap_err(),
            Error::ResponseExceedsCount { index: 0 }
        );
    }
}
