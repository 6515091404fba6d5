//! Plug-in estimators for the local quantities the limit laws depend on.
//!
//! The limit of the grid estimator at a point `x0` is governed by three
//! local unknowns: the distribution value `F(x0)`, the inspection density
//! `g(x0)`, and the distribution's slope `f(x0)`. Each is estimated from
//! the fitted step function and the raw counts over a data-driven window
//! around the anchor, and the trio is folded into the noise scale
//! `alpha = sqrt(F(1-F)/g)` and the drift scale `beta = f/2`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Anchor, BinnedCounts, StepEstimate};

/// Tuning for the window searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuisanceConfig {
    /// The density window grows until it holds mass `threshold_mult / ln n`.
    pub threshold_mult: f64,
}

impl Default for NuisanceConfig {
    fn default() -> Self {
        Self {
            threshold_mult: 1.0,
        }
    }
}

/// The estimated local quantities and the windows that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuisanceEstimates {
    /// Estimated distribution value at the anchor.
    pub cdf_x0: f64,
    /// Estimated inspection density at the anchor.
    pub obs_density_x0: f64,
    /// Estimated slope of the distribution at the anchor.
    pub cdf_slope_x0: f64,
    /// Noise scale `sqrt(cdf * (1 - cdf) / density)`.
    pub alpha: f64,
    /// Drift scale `slope / 2`.
    pub beta: f64,
    /// Half-width (in grid steps) of the density window.
    pub j_star: usize,
    /// Half-width (in grid steps) of the slope window.
    pub i_star: usize,
}

/// Smallest window half-width `j >= 1` whose bins hold the required mass.
///
/// The window for half-width `j` spans the bins `l-j+1 ..= r+j` (clamped to
/// the grid), i.e. the inspections falling in `(t_{l-j}, t_{r+j}]`.
///
/// # Errors
///
/// [`Error::WindowExhausted`] when even the full grid holds less than
/// `mass_threshold` of the sample (only possible for thresholds above 1).
pub fn find_j_star(binned: &BinnedCounts, anchor: &Anchor, mass_threshold: f64) -> Result<usize> {
    let k = binned.grid().k();
    let n = binned.n();
    if n == 0 {
        return Err(Error::NoData);
    }
    let j_max = anchor.l.max(k - anchor.r);
    for j in 1..=j_max {
        let lo = anchor.l.saturating_sub(j - 1).max(1);
        let hi = (anchor.r + j).min(k);
        let mass: u64 = binned.counts()[lo - 1..hi].iter().sum();
        if mass as f64 / n as f64 >= mass_threshold {
            if j == j_max {
                log::warn!("density window spans the whole grid; localization is lost");
            }
            return Ok(j);
        }
    }
    Err(Error::WindowExhausted)
}

/// Histogram estimate of the inspection density at the anchor.
///
/// Mass of the bins `l-j+1 ..= r+j` divided by the window's time width
/// `t_{r+j} - t_{l-j}`, both clamped to the grid.
pub fn estimate_g_x0(binned: &BinnedCounts, anchor: &Anchor, j_star: usize) -> Result<f64> {
    let grid = binned.grid();
    let k = grid.k();
    let n = binned.n();
    if n == 0 {
        return Err(Error::NoData);
    }
    let lo = anchor.l.saturating_sub(j_star - 1).max(1);
    let hi = (anchor.r + j_star).min(k);
    let mass: u64 = binned.counts()[lo - 1..hi].iter().sum();
    let width = grid.point(hi) - grid.point(lo - 1);
    let density = mass as f64 / (n as f64 * width);
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::NonpositiveDensity);
    }
    Ok(density)
}

/// Smallest window half-width `i > j_star` across which the fitted step
/// function actually increases: `F(t_{l-i}) < F(t_{l+i})`.
///
/// Indices past the grid ends read the step function's boundary values
/// (zero below the first point).
///
/// # Errors
///
/// [`Error::FlatEstimate`] when the window reaches both ends of the grid
/// without finding an increase.
pub fn find_i_star(estimate: &StepEstimate, anchor: &Anchor, j_star: usize) -> Result<usize> {
    let k = estimate.grid().k();
    let mut i = j_star + 1;
    loop {
        let lo = anchor.l.saturating_sub(i);
        let hi = (anchor.l + i).min(k);
        if estimate.level(lo) < estimate.level(hi) {
            return Ok(i);
        }
        if lo == 0 && hi == k {
            return Err(Error::FlatEstimate);
        }
        i += 1;
    }
}

/// Local slope of the fitted step function at the anchor.
///
/// Weighted least squares of the fitted levels on the grid times over
/// `l-i_star ..= l+i_star` (clamped), weighted by the inspection counts.
///
/// # Errors
///
/// [`Error::DegenerateWindow`] when fewer than two distinct inspected grid
/// points fall in the window, [`Error::NonpositiveSlope`] when the fitted
/// slope is not positive.
pub fn estimate_f_x0(
    binned: &BinnedCounts,
    estimate: &StepEstimate,
    anchor: &Anchor,
    i_star: usize,
) -> Result<f64> {
    let grid = binned.grid();
    let k = grid.k();
    let lo = anchor.l.saturating_sub(i_star).max(1);
    let hi = (anchor.l + i_star).min(k);

    let mut points: Vec<(f64, f64, f64)> = Vec::with_capacity(hi - lo + 1);
    let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for m in lo..=hi {
        let w = binned.counts()[m - 1] as f64;
        if w == 0.0 {
            continue;
        }
        let x = grid.point(m);
        let y = estimate.level(m);
        points.push((w, x, y));
        sw += w;
        sx += w * x;
        sy += w * y;
    }
    if points.len() < 2 {
        return Err(Error::DegenerateWindow);
    }
    let xbar = sx / sw;
    let ybar = sy / sw;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (w, x, y) in &points {
        sxx += w * (x - xbar) * (x - xbar);
        sxy += w * (x - xbar) * (y - ybar);
    }
    if !(sxx.is_finite() && sxx > 0.0) {
        return Err(Error::DegenerateWindow);
    }
    let slope = sxy / sxx;
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::NonpositiveSlope { value: slope });
    }
    Ok(slope)
}

/// Distribution value at the anchor, blending the bracketing levels as
/// `rho * F(t_l) + (1 - rho) * F(t_r)`.
pub fn estimate_cdf_x0(estimate: &StepEstimate, anchor: &Anchor) -> f64 {
    anchor.rho * estimate.level(anchor.l) + (1.0 - anchor.rho) * estimate.level(anchor.r)
}

/// Runs the full nuisance pipeline at the anchor.
///
/// # Errors
///
/// Besides the individual estimators' failures, rejects mismatched grids,
/// samples too small for the log-based threshold, and distribution values
/// at 0 or 1 (which make the noise scale degenerate).
pub fn estimate_all(
    binned: &BinnedCounts,
    estimate: &StepEstimate,
    anchor: &Anchor,
    config: &NuisanceConfig,
) -> Result<NuisanceEstimates> {
    if binned.grid() != estimate.grid() {
        return Err(Error::GridMismatch);
    }
    if !(config.threshold_mult.is_finite() && config.threshold_mult > 0.0) {
        return Err(Error::InvalidSamplerConfig {
            reason: "threshold_mult must be positive",
        });
    }
    let n = binned.n();
    if n < 2 {
        return Err(Error::InvalidSampleSize);
    }
    let mass_threshold = config.threshold_mult / libm::log(n as f64);

    let cdf_x0 = estimate_cdf_x0(estimate, anchor);
    if !(cdf_x0 > 0.0 && cdf_x0 < 1.0) {
        return Err(Error::DegenerateAlpha { value: cdf_x0 });
    }
    let j_star = find_j_star(binned, anchor, mass_threshold)?;
    let obs_density_x0 = estimate_g_x0(binned, anchor, j_star)?;
    let i_star = find_i_star(estimate, anchor, j_star)?;
    let cdf_slope_x0 = estimate_f_x0(binned, estimate, anchor, i_star)?;
    let alpha = libm::sqrt(cdf_x0 * (1.0 - cdf_x0) / obs_density_x0);
    let beta = cdf_slope_x0 / 2.0;
    Ok(NuisanceEstimates {
        cdf_x0,
        obs_density_x0,
        cdf_slope_x0,
        alpha,
        beta,
        j_star,
        i_star,
    })
}
