//! Confidence intervals for the distribution value at a point.
//!
//! The adaptive procedure estimates every unknown from the data: the grid
//! scale from the observed spacing, the local nuisance quantities from the
//! fit, and the limit quantiles by Monte Carlo from the critical-regime
//! family, which interpolates the coarse- and fine-grid limits and is
//! therefore safe to use whichever regime the data came from. Oracle
//! variants with known limit parameters are provided for benchmarking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{
    boundary_draws, chernoff_draws, empirical_quantile, gaussian_ci_halfwidth, LimitParams,
    SamplerConfig,
};
use crate::model::{Anchor, BinnedCounts, GridSpec, StepEstimate};
use crate::nuisance::{estimate_all, NuisanceConfig, NuisanceEstimates};

/// A two-sided interval for the distribution value at the anchor.
///
/// `q_lo` and `q_hi` are the limit-law quantiles that produced the
/// endpoints; `lower = center - rate * q_hi` and `upper = center - rate *
/// q_lo`, where the rate is the procedure's convergence rate at the
/// configured sample size. Endpoints are clamped to `[0, 1]`, with
/// `clamped` recording when that happened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiResult {
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    /// Estimated grid scale; absent for the oracle procedures.
    pub c_hat: Option<f64>,
    pub clamped: bool,
    /// Local estimates behind the interval; absent for the oracles.
    pub nuisance: Option<NuisanceEstimates>,
}

impl CiResult {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Grid scale recovered from the observed spacing at the critical rate:
/// `(b - a) * n^{1/3} / K`.
pub fn compute_c_hat(grid: &GridSpec, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidSampleSize);
    }
    Ok((grid.b() - grid.a()) * libm::cbrt(n as f64) / grid.k() as f64)
}

fn check_level(eta: f64) -> Result<()> {
    if !(eta.is_finite() && eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidLevel { eta });
    }
    Ok(())
}

fn sorted_quantile_pair(mut draws: alloc::vec::Vec<f64>, eta: f64) -> Result<(f64, f64)> {
    draws.sort_unstable_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
    let q_lo = empirical_quantile(&draws, eta / 2.0)?;
    let q_hi = empirical_quantile(&draws, 1.0 - eta / 2.0)?;
    Ok((q_lo, q_hi))
}

fn assemble(
    center: f64,
    rate: f64,
    q_lo: f64,
    q_hi: f64,
    c_hat: Option<f64>,
    nuisance: Option<NuisanceEstimates>,
) -> CiResult {
    let raw_lower = center - rate * q_hi;
    let raw_upper = center - rate * q_lo;
    let lower = raw_lower.clamp(0.0, 1.0);
    let upper = raw_upper.clamp(0.0, 1.0);
    CiResult {
        lower,
        upper,
        center,
        q_lo,
        q_hi,
        c_hat,
        clamped: lower != raw_lower || upper != raw_upper,
        nuisance,
    }
}

/// The fully data-driven interval at miscoverage `eta`.
///
/// Centers on the fitted value at the anchor's left neighbor, estimates the
/// grid scale and the local nuisance parameters, and inverts Monte Carlo
/// quantiles of the critical-regime limit law at the cube-root rate.
pub fn adaptive_interval(
    binned: &BinnedCounts,
    estimate: &StepEstimate,
    anchor: &Anchor,
    eta: f64,
    sampler: &SamplerConfig,
    nuisance_cfg: &NuisanceConfig,
) -> Result<CiResult> {
    check_level(eta)?;
    if binned.grid() != estimate.grid() {
        return Err(Error::GridMismatch);
    }
    let n = binned.n();
    if n == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let nuisance = estimate_all(binned, estimate, anchor, nuisance_cfg)?;
    let c_hat = compute_c_hat(binned.grid(), n)?;
    let params = LimitParams::new(c_hat, nuisance.alpha, nuisance.beta)?;
    let (q_lo, q_hi) = sorted_quantile_pair(boundary_draws(&params, sampler)?, eta)?;
    let rate = libm::cbrt(1.0 / n as f64);
    Ok(assemble(
        estimate.level(anchor.l),
        rate,
        q_lo,
        q_hi,
        Some(c_hat),
        Some(nuisance),
    ))
}

/// Oracle interval for the coarse-grid regime with known limit parameters.
///
/// Symmetric around `center` with closed-form Gaussian quantiles at the
/// rate `n^{-(1-gamma)/2}`.
pub fn oracle_interval_gaussian(
    center: f64,
    alpha: f64,
    c: f64,
    n: u64,
    gamma: f64,
    eta: f64,
) -> Result<CiResult> {
    check_level(eta)?;
    let half_hi = gaussian_ci_halfwidth(alpha, c, n, gamma, 1.0 - eta / 2.0)?;
    let half_lo = gaussian_ci_halfwidth(alpha, c, n, gamma, eta / 2.0)?;
    // The halfwidths already include the rate; report unit-rate quantiles.
    Ok(assemble(center, 1.0, half_lo, half_hi, None, None))
}

/// Oracle interval for the fine-grid regime with known limit parameters.
///
/// Inverts Monte Carlo quantiles of the Brownian-path limit law at the
/// cube-root rate.
pub fn oracle_interval_chernoff(
    center: f64,
    alpha: f64,
    beta: f64,
    n: u64,
    eta: f64,
    sampler: &SamplerConfig,
) -> Result<CiResult> {
    check_level(eta)?;
    if n == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let (q_lo, q_hi) = sorted_quantile_pair(chernoff_draws(alpha, beta, sampler)?, eta)?;
    let rate = libm::cbrt(1.0 / n as f64);
    Ok(assemble(center, rate, q_lo, q_hi, None, None))
}

/// Oracle interval for the critical regime with known limit parameters.
///
/// Inverts Monte Carlo quantiles of the critical-regime family at the
/// cube-root rate; this is the adaptive procedure minus the estimation of
/// `c`, `alpha`, and `beta`.
pub fn oracle_interval_boundary(
    center: f64,
    params: &LimitParams,
    n: u64,
    eta: f64,
    sampler: &SamplerConfig,
) -> Result<CiResult> {
    check_level(eta)?;
    if n == 0 {
        return Err(Error::InvalidSampleSize);
    }
    let (q_lo, q_hi) = sorted_quantile_pair(boundary_draws(params, sampler)?, eta)?;
    let rate = libm::cbrt(1.0 / n as f64);
    Ok(assemble(center, rate, q_lo, q_hi, None, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{locate_anchor, npmle};
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn grid_scale_recovers_the_design_value() {
        let g = GridSpec::from_spacing(0.0, 1.0, 0.05).unwrap();
        assert_eq!(g.k(), 20);
        let c = compute_c_hat(&g, 1000).unwrap();
        assert!((c - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn grid_scale_stays_within_the_flooring_slack() {
        for &c in &[0.17, 0.5, 1.0, 2.3, 4.9] {
            for &n in &[50u64, 1000, 250_000] {
                for &len in &[0.5, 1.0, 7.3] {
                    let delta = c * libm::cbrt(1.0 / n as f64);
                    if delta >= len {
                        continue;
                    }
                    let g = GridSpec::from_spacing(0.0, len, delta).unwrap();
                    let c_hat = compute_c_hat(&g, n).unwrap();
                    let slack = delta / (len - delta);
                    assert!(
                        c_hat >= c * (1.0 - 1e-9) && c_hat <= c * (1.0 + slack) * (1.0 + 1e-9),
                        "c={c} n={n} len={len}: c_hat={c_hat}"
                    );
                }
            }
        }
    }

    fn ramp_data() -> (BinnedCounts, StepEstimate, Anchor) {
        let g = GridSpec::from_spacing(0.0, 1.05, 0.1).unwrap();
        let counts = vec![20u64; 10];
        let responses: Vec<u64> = (0..10).map(|i| 2 * i + 1).collect();
        let binned = BinnedCounts::from_parts(g, counts, responses).unwrap();
        let est = npmle(&binned).unwrap();
        let anchor = locate_anchor(&g, 0.45).unwrap();
        (binned, est, anchor)
    }

    #[test]
    fn adaptive_interval_brackets_the_center() {
        let (binned, est, anchor) = ramp_data();
        let sampler = SamplerConfig {
            seed: 42,
            draws: 500,
            half_window: 80,
            ..SamplerConfig::default()
        };
        let ci = adaptive_interval(
            &binned,
            &est,
            &anchor,
            0.05,
            &sampler,
            &NuisanceConfig::default(),
        )
        .unwrap();
        assert!(ci.lower < ci.center && ci.center < ci.upper);
        assert!(ci.q_lo < 0.0 && ci.q_hi > 0.0);
        assert!(ci.length() > 0.0 && ci.length() < 1.0);
        assert!(ci.c_hat.is_some() && ci.nuisance.is_some());
        assert!(!ci.clamped);
        assert!(ci.contains(ci.center));
        let again = adaptive_interval(
            &binned,
            &est,
            &anchor,
            0.05,
            &sampler,
            &NuisanceConfig::default(),
        )
        .unwrap();
        assert_eq!(ci, again);
    }

    #[test]
    fn tighter_levels_nest_inside_looser_ones() {
        let (binned, est, anchor) = ramp_data();
        let sampler = SamplerConfig {
            seed: 7,
            draws: 500,
            half_window: 80,
            ..SamplerConfig::default()
        };
        let wide = adaptive_interval(
            &binned,
            &est,
            &anchor,
            0.01,
            &sampler,
            &NuisanceConfig::default(),
        )
        .unwrap();
        let narrow = adaptive_interval(
            &binned,
            &est,
            &anchor,
            0.10,
            &sampler,
            &NuisanceConfig::default(),
        )
        .unwrap();
        assert!(wide.lower <= narrow.lower && narrow.upper <= wide.upper);
    }

    #[test]
    fn gaussian_oracle_is_symmetric_with_the_closed_form_width() {
        let ci = oracle_interval_gaussian(0.5, 0.5, 1.0 / 6.0, 1000, 1.0 / 6.0, 0.05).unwrap();
        let half = 0.13498755171017324;
        assert!((ci.upper - (0.5 + half)).abs() <= 1e-12);
        assert!((ci.lower - (0.5 - half)).abs() <= 1e-12);
        assert!(!ci.clamped);
        assert!(ci.c_hat.is_none() && ci.nuisance.is_none());
    }

    #[test]
    fn chernoff_oracle_shrinks_at_the_cube_root_rate() {
        let sampler = SamplerConfig {
            seed: 5,
            draws: 400,
            fine_step: 0.02,
            fine_halfwidth: 12.0,
            ..SamplerConfig::default()
        };
        let small = oracle_interval_chernoff(0.5, 0.5, 0.5, 500, 0.05, &sampler).unwrap();
        let large = oracle_interval_chernoff(0.5, 0.5, 0.5, 4000, 0.05, &sampler).unwrap();
        // Same quantiles, eightfold sample: length halves exactly.
        assert!((small.length() - 2.0 * large.length()).abs() <= 1e-12);
    }

    #[test]
    fn endpoints_clamp_into_the_unit_interval() {
        let sampler = SamplerConfig {
            seed: 9,
            draws: 300,
            half_window: 60,
            ..SamplerConfig::default()
        };
        let params = LimitParams::new(1.0, 1.0, 0.5).unwrap();
        // A center near zero with a small sample forces the lower endpoint
        // below zero before clamping.
        let ci = oracle_interval_boundary(0.01, &params, 8, 0.05, &sampler).unwrap();
        assert!(ci.clamped);
        assert!(ci.lower >= 0.0 && ci.upper <= 1.0);
        assert!(ci.lower <= ci.upper);
    }

    #[test]
    fn levels_and_sizes_are_validated() {
        let (binned, est, anchor) = ramp_data();
        let sampler = SamplerConfig::with_seed(1);
        for bad in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(matches!(
                adaptive_interval(
                    &binned,
                    &est,
                    &anchor,
                    bad,
                    &sampler,
                    &NuisanceConfig::default()
                )
                .unwrap_err(),
                Error::InvalidLevel { .. }
            ));
        }
        assert_eq!(
            oracle_interval_chernoff(0.5, 0.5, 0.5, 0, 0.05, &sampler).unwrap_err(),
            Error::InvalidSampleSize
        );
    }
}
