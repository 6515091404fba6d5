//! Monte Carlo samplers for the limit laws of the grid estimator at a point.
//!
//! Three regimes arise depending on how fast the grid refines with the
//! sample size. A coarse grid gives a plain Gaussian limit whose quantiles
//! are available in closed form ([`gaussian_ci_halfwidth`]). A fine grid
//! gives the slope-at-zero law of the greatest convex minorant of a drifted
//! Brownian motion, approximated on a fine grid ([`chernoff_draws`]). At the
//! critical rate the limit is a one-parameter family that interpolates the
//! two: the slope at zero of the convex minorant of a Gaussian random walk
//! with parabolic drift observed at integer multiples of the scale parameter
//! ([`boundary_draws`]). All samplers are seeded and deterministic: draw `b`
//! always comes from substream `b` of the configured seed, so results are
//! independent of batching or thread count.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotonic::Fit;
use crate::normal::normal_quantile;
use crate::rng::{fill_standard_normal, substream};

/// Parameters of the critical-regime limit family: the grid scale `c` and
/// the local curvature pair `(alpha, beta)`.
///
/// `alpha` is the standard deviation of the local noise (`sqrt(F(1-F)/g)`
/// at the point of interest) and `beta` is half the slope of the estimated
/// function there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    c: f64,
    alpha: f64,
    beta: f64,
}

impl LimitParams {
    /// # Errors
    ///
    /// All three parameters must be finite and strictly positive.
    pub fn new(c: f64, alpha: f64, beta: f64) -> Result<Self> {
        for v in [c, alpha, beta] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidLimitParams);
            }
        }
        Ok(Self { c, alpha, beta })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Drift rate of the standardized random walk: `2*beta*c^{3/2}/alpha`.
    pub fn theta(&self) -> f64 {
        2.0 * self.beta * self.c * libm::sqrt(self.c) / self.alpha
    }
}

/// Knobs of the Monte Carlo samplers.
///
/// `half_window` truncates the random walk of the critical-regime sampler to
/// `|k| <= half_window`; `fine_step` and `fine_halfwidth` discretize the
/// Brownian-path sampler onto `[-fine_halfwidth, fine_halfwidth]`. The
/// defaults reproduce quantiles stably to well inside the Monte Carlo noise
/// of `draws = 3000`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub draws: usize,
    pub half_window: usize,
    pub fine_step: f64,
    pub fine_halfwidth: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            draws: 3000,
            half_window: 300,
            fine_step: 0.005,
            fine_halfwidth: 20.0,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate_common(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::InvalidSamplerConfig {
                reason: "draws must be positive",
            });
        }
        if self.draws < 100 {
            log::warn!(
                "sampler: only {} draws; empirical quantiles will be coarse",
                self.draws
            );
        }
        Ok(())
    }

    fn validate_boundary(&self) -> Result<()> {
        self.validate_common()?;
        if self.half_window == 0 {
            return Err(Error::InvalidSamplerConfig {
                reason: "half_window must be positive",
            });
        }
        Ok(())
    }

    fn validate_chernoff(&self) -> Result<()> {
        self.validate_common()?;
        if !(self.fine_step.is_finite() && self.fine_step > 0.0) {
            return Err(Error::InvalidSamplerConfig {
                reason: "fine_step must be positive",
            });
        }
        if !(self.fine_halfwidth.is_finite() && self.fine_halfwidth > self.fine_step) {
            return Err(Error::InvalidSamplerConfig {
                reason: "fine_halfwidth must exceed fine_step",
            });
        }
        // The minorant's slope at zero is read off a finite window; a short
        // window lets the truncation boundary distort it.
        if self.fine_halfwidth < 10.0 {
            return Err(Error::LocalizationRisk);
        }
        Ok(())
    }

    /// Number of path increments per side of the Brownian sampler.
    fn fine_count(&self) -> usize {
        (self.fine_halfwidth / self.fine_step).round() as usize
    }
}

/// Slope at zero of the convex minorant of the standardized drifted walk
/// `k -> Z_k + theta*k`, computed from pre-drawn standard normals.
///
/// `noise[i]` supplies `Z_k` for `k = i - half_window`, so the slice must
/// hold `2*half_window + 1` values. The minorant of the walk's cumulative
/// diagram has, as its left slope over the step ending at zero, the value at
/// position `half_window` of the unit-weight isotonic fit of these
/// per-step slopes.
pub fn drifted_walk_draw(theta: f64, half_window: usize, noise: &[f64]) -> f64 {
    let width = 2 * half_window + 1;
    assert_eq!(noise.len(), width, "noise slice must cover the window");
    let mut slopes = Vec::with_capacity(width);
    for (i, z) in noise.iter().enumerate() {
        let k = i as f64 - half_window as f64;
        slopes.push(z + theta * k);
    }
    let mut fit = Fit::with_capacity(width);
    fit.run_unit(&slopes);
    fit.value_at(half_window)
}

fn boundary_slopes_into(slopes: &mut Vec<f64>, params: &LimitParams, noise: &[f64]) {
    let half = (noise.len() - 1) / 2;
    let scale = params.alpha / libm::sqrt(params.c);
    let drift = 2.0 * params.beta * params.c;
    slopes.clear();
    for (i, z) in noise.iter().enumerate() {
        let k = i as f64 - half as f64;
        slopes.push(scale * z + drift * k);
    }
}

/// One draw from the critical-regime limit law, using pre-drawn noise.
///
/// `noise[i]` supplies the increment for walk position `k = i - half_window`;
/// the slice length must be `2*half_window + 1`.
pub fn boundary_draw_from_noise(params: &LimitParams, half_window: usize, noise: &[f64]) -> f64 {
    assert_eq!(noise.len(), 2 * half_window + 1);
    let mut slopes = Vec::new();
    boundary_slopes_into(&mut slopes, params, noise);
    let mut fit = Fit::with_capacity(slopes.len());
    fit.run_unit(&slopes);
    fit.value_at(half_window)
}

/// One draw from the critical-regime limit law.
pub fn sample_boundary_slope<R: Rng + ?Sized>(
    params: &LimitParams,
    half_window: usize,
    rng: &mut R,
) -> f64 {
    let mut noise = alloc::vec![0.0; 2 * half_window + 1];
    fill_standard_normal(rng, &mut noise);
    boundary_draw_from_noise(params, half_window, &noise)
}

/// A batch of draws from the critical-regime limit law.
///
/// Draw `b` is generated from substream `b` of `config.seed`, so the batch
/// is reproducible and insensitive to how it is split up.
pub fn boundary_draws(params: &LimitParams, config: &SamplerConfig) -> Result<Vec<f64>> {
    config.validate_boundary()?;
    let width = 2 * config.half_window + 1;
    let mut noise = alloc::vec![0.0; width];
    let mut slopes = Vec::with_capacity(width);
    let mut fit = Fit::with_capacity(width);
    let mut out = Vec::with_capacity(config.draws);
    for b in 0..config.draws {
        let mut rng = substream(config.seed, b as u64);
        fill_standard_normal(&mut rng, &mut noise);
        boundary_slopes_into(&mut slopes, params, &noise);
        fit.run_unit(&slopes);
        out.push(fit.value_at(config.half_window));
    }
    Ok(out)
}

/// Pre-drawn standard normal noise, one row per Monte Carlo draw.
///
/// Rows are the same substreams [`boundary_draws`] would use, so comparisons
/// across different limit parameters can share their noise paths draw by
/// draw, which turns distributional comparisons into nearly pathwise ones.
#[derive(Debug, Clone)]
pub struct NoiseBank {
    cols: usize,
    data: Vec<f64>,
}

impl NoiseBank {
    /// `rows` independent rows of `cols` standard normals from `seed`.
    pub fn standard_normal(seed: u64, rows: usize, cols: usize) -> Self {
        assert!(cols > 0, "noise bank rows must be nonempty");
        let mut data = alloc::vec![0.0; rows * cols];
        for (b, row) in data.chunks_mut(cols).enumerate() {
            let mut rng = substream(seed, b as u64);
            fill_standard_normal(&mut rng, row);
        }
        Self { cols, data }
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Centered subslice of a row covering `2*half_window + 1` positions.
    fn window(&self, r: usize, half_window: usize) -> &[f64] {
        let width = 2 * half_window + 1;
        let start = (self.cols - width) / 2;
        &self.row(r)[start..start + width]
    }
}

/// Critical-regime draws sharing the bank's noise paths row by row.
///
/// # Errors
///
/// The bank's rows must cover the requested window.
pub fn boundary_draws_from_bank(
    params: &LimitParams,
    half_window: usize,
    bank: &NoiseBank,
) -> Result<Vec<f64>> {
    if half_window == 0 || bank.cols < 2 * half_window + 1 {
        return Err(Error::InvalidSamplerConfig {
            reason: "noise bank rows are narrower than the sampler window",
        });
    }
    let width = 2 * half_window + 1;
    let mut slopes = Vec::with_capacity(width);
    let mut fit = Fit::with_capacity(width);
    let mut out = Vec::with_capacity(bank.rows());
    for r in 0..bank.rows() {
        boundary_slopes_into(&mut slopes, params, bank.window(r, half_window));
        fit.run_unit(&slopes);
        out.push(fit.value_at(half_window));
    }
    Ok(out)
}

/// One draw of the slope at zero of the convex minorant of a drifted
/// Brownian path, from pre-drawn noise.
///
/// The path `alpha*W(t) + beta*t^2` is discretized with increments of width
/// `step` at positions `j = -half_count+1 ..= half_count`; `noise[i]`
/// supplies the increment for `j = i - half_count + 1`, so the slice must
/// hold `2*half_count` values. The returned value is the isotonic fit of the
/// per-increment slopes at the increment ending at zero.
pub fn chernoff_draw_from_noise(
    alpha: f64,
    beta: f64,
    step: f64,
    half_count: usize,
    noise: &[f64],
) -> f64 {
    assert_eq!(noise.len(), 2 * half_count, "noise must cover the window");
    let inv_sqrt_step = 1.0 / libm::sqrt(step);
    let mut slopes = Vec::with_capacity(noise.len());
    for (i, z) in noise.iter().enumerate() {
        let j = (i + 1) as f64 - half_count as f64;
        slopes.push(alpha * z * inv_sqrt_step + beta * step * (2.0 * j - 1.0));
    }
    let mut fit = Fit::with_capacity(slopes.len());
    fit.run_unit(&slopes);
    fit.value_at(half_count - 1)
}

/// A batch of draws of the slope at zero of the convex minorant of
/// `alpha*W(t) + beta*t^2`, the fine-grid limit law.
///
/// Internally samples the standardized path (`alpha = beta = 1`) and scales
/// by `(alpha^2 * beta)^{1/3}`, which is exact for Brownian paths.
pub fn chernoff_draws(alpha: f64, beta: f64, config: &SamplerConfig) -> Result<Vec<f64>> {
    if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidLimitParams);
    }
    config.validate_chernoff()?;
    let half_count = config.fine_count();
    if half_count == 0 {
        return Err(Error::InvalidSamplerConfig {
            reason: "fine grid has no increments",
        });
    }
    let scale = libm::cbrt(alpha * alpha * beta);
    let mut noise = alloc::vec![0.0; 2 * half_count];
    let mut out = Vec::with_capacity(config.draws);
    for b in 0..config.draws {
        let mut rng = substream(config.seed, b as u64);
        fill_standard_normal(&mut rng, &mut noise);
        out.push(scale * chernoff_draw_from_noise(1.0, 1.0, config.fine_step, half_count, &noise));
    }
    Ok(out)
}

/// Closed-form confidence halfwidth in the coarse-grid regime.
///
/// Returns `n^{-(1-gamma)/2} * alpha * c^{-1/2} * z_p`, the `p`-quantile of
/// the estimator's Gaussian limit at the point of interest (signed: `p` below
/// one half gives a negative value).
///
/// # Errors
///
/// The closed form only applies for `gamma` strictly between 0 and 1/3.
pub fn gaussian_ci_halfwidth(alpha: f64, c: f64, n: u64, gamma: f64, p: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0 && c.is_finite() && c > 0.0) {
        return Err(Error::InvalidLimitParams);
    }
    if n == 0 {
        return Err(Error::InvalidSampleSize);
    }
    if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0 / 3.0) {
        return Err(Error::WrongRegime { gamma });
    }
    let z = normal_quantile(p)?;
    let rate = libm::pow(n as f64, -(1.0 - gamma) / 2.0);
    Ok(rate * alpha / libm::sqrt(c) * z)
}

/// Lower empirical quantile of a sorted sample: the order statistic of rank
/// `ceil(p * B)` (1-based).
///
/// The rank computation subtracts a small guard before rounding up so that
/// products like `0.025 * 1000`, which float arithmetic places a hair above
/// the integer they denote, do not get bumped to the next rank.
///
/// # Errors
///
/// The sample must be nonempty and `p` inside `(0, 1)`.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability { p });
    }
    let rank = libm::ceil(p * sorted.len() as f64 - 1e-9) as usize;
    let rank = rank.clamp(1, sorted.len());
    Ok(sorted[rank - 1])
}

/// A table of empirical quantiles of the critical-regime limit law, carrying
/// everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileTable {
    pub params: LimitParams,
    pub config: SamplerConfig,
    pub probs: Vec<f64>,
    pub quantiles: Vec<f64>,
}

/// Empirical quantiles of the critical-regime limit law at `probs`.
pub fn quantiles_boundary(
    params: &LimitParams,
    config: &SamplerConfig,
    probs: &[f64],
) -> Result<QuantileTable> {
    let mut draws = boundary_draws(params, config)?;
    draws.sort_unstable_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
    let mut quantiles = Vec::with_capacity(probs.len());
    for p in probs {
        quantiles.push(empirical_quantile(&draws, *p)?);
    }
    Ok(QuantileTable {
        params: *params,
        config: *config,
        probs: probs.to_vec(),
        quantiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isotonic::{gcm, left_slope, PlanarDiagram};
    use alloc::vec;

    fn draw_noise(seed: u64, index: u64, len: usize) -> Vec<f64> {
        let mut rng = substream(seed, index);
        let mut noise = vec![0.0; len];
        fill_standard_normal(&mut rng, &mut noise);
        noise
    }

    #[test]
    fn boundary_draw_matches_minorant_of_cumulative_diagram() {
        let params = LimitParams::new(0.7, 1.3, 0.4).unwrap();
        let half = 12;
        for index in 0..40 {
            let noise = draw_noise(0xD1A6, index, 2 * half + 1);
            let direct = boundary_draw_from_noise(&params, half, &noise);

            // Independent route: accumulate the walk into a planar diagram
            // whose chord over (c(k-1), ck] has exactly the sampler's slope
            // d_k, then take the minorant's left slope at zero.
            let c = params.c();
            let mut points = Vec::new();
            let mut y = 0.0;
            points.push((-(half as f64 + 1.0) * c, 0.0));
            for (i, z) in noise.iter().enumerate() {
                let k = i as f64 - half as f64;
                y += c * (params.alpha() / libm::sqrt(c) * z + 2.0 * params.beta() * c * k);
                points.push((k * c, y));
            }
            let minorant = gcm(&PlanarDiagram::new(points).unwrap());
            let via_gcm = left_slope(&minorant, 0.0).unwrap();
            assert!(
                (direct - via_gcm).abs() <= 1e-9,
                "draw {index}: {direct} vs {via_gcm}"
            );
        }
    }

    #[test]
    fn boundary_draw_rescales_to_the_standardized_walk() {
        let half = 40;
        for (i, (c, alpha, beta)) in [(0.5, 0.35, 0.25), (2.0, 1.0, 1.0), (1.3, 0.2, 0.8)]
            .into_iter()
            .enumerate()
        {
            let params = LimitParams::new(c, alpha, beta).unwrap();
            let noise = draw_noise(0x5CA1E, i as u64, 2 * half + 1);
            let direct = boundary_draw_from_noise(&params, half, &noise);
            let standardized = drifted_walk_draw(params.theta(), half, &noise);
            let want = alpha / libm::sqrt(c) * standardized;
            assert!(
                (direct - want).abs() <= 1e-12 * want.abs().max(1.0),
                "{direct} vs {want}"
            );
        }
    }

    #[test]
    fn chernoff_draw_rescales_to_the_standardized_path() {
        let half_count = 60;
        let base_step = 0.01;
        for (i, (alpha, beta)) in [(0.5, 0.25), (2.0, 0.5), (0.3536, 0.25)]
            .into_iter()
            .enumerate()
        {
            let noise = draw_noise(0xC0FFEE, i as u64, 2 * half_count);
            let native_step = base_step * libm::cbrt((alpha / beta) * (alpha / beta));
            let native = chernoff_draw_from_noise(alpha, beta, native_step, half_count, &noise);
            let scaled = libm::cbrt(alpha * alpha * beta)
                * chernoff_draw_from_noise(1.0, 1.0, base_step, half_count, &noise);
            assert!(
                (native - scaled).abs() <= 1e-12 * scaled.abs().max(1.0),
                "{native} vs {scaled}"
            );
        }
    }

    #[test]
    fn noiseless_paths_recover_the_pure_drift_slopes() {
        let params = LimitParams::new(0.5, 1.0, 0.25).unwrap();
        let zeros = vec![0.0; 2 * 50 + 1];
        assert_eq!(boundary_draw_from_noise(&params, 50, &zeros), 0.0);
        let zeros = vec![0.0; 2 * 30];
        let v = chernoff_draw_from_noise(1.0, 0.5, 0.01, 30, &zeros);
        assert!((v - (-0.5 * 0.01)).abs() <= 1e-15);
    }

    #[test]
    fn batches_are_reproducible_and_seed_sensitive() {
        let params = LimitParams::new(0.5, 0.3536, 0.25).unwrap();
        let config = SamplerConfig {
            seed: 7,
            draws: 50,
            half_window: 40,
            ..SamplerConfig::default()
        };
        let a = boundary_draws(&params, &config).unwrap();
        let b = boundary_draws(&params, &config).unwrap();
        assert_eq!(a, b);
        let other = SamplerConfig { seed: 8, ..config };
        let c = boundary_draws(&params, &other).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bank_rows_reproduce_the_streamed_batch() {
        let params = LimitParams::new(1.0, 0.3536, 0.25).unwrap();
        let config = SamplerConfig {
            seed: 99,
            draws: 30,
            half_window: 25,
            ..SamplerConfig::default()
        };
        let streamed = boundary_draws(&params, &config).unwrap();
        let bank = NoiseBank::standard_normal(99, 30, 2 * 25 + 1);
        let banked = boundary_draws_from_bank(&params, 25, &bank).unwrap();
        assert_eq!(streamed, banked);
    }

    #[test]
    fn widening_the_window_does_not_move_the_slope_at_zero() {
        let params = LimitParams::new(1.0, 0.3536, 0.25).unwrap();
        let wide = 120;
        let narrow = 60;
        for index in 0..20 {
            let noise = draw_noise(0x77, index, 2 * wide + 1);
            let inner = &noise[wide - narrow..wide + narrow + 1];
            let a = boundary_draw_from_noise(&params, narrow, inner);
            let b = boundary_draw_from_noise(&params, wide, &noise);
            assert!((a - b).abs() <= 1e-12, "draw {index}: {a} vs {b}");
        }
    }

    #[test]
    fn quantile_rank_convention_handles_float_products() {
        let sorted: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        // 0.025 * 1000 floats to just above 25; the guard keeps rank 25.
        assert_eq!(empirical_quantile(&sorted, 0.025).unwrap(), 24.0);
        assert_eq!(empirical_quantile(&sorted, 0.975).unwrap(), 974.0);
        let small = [10.0, 20.0, 30.0, 40.0];
        assert_eq!(empirical_quantile(&small, 0.5).unwrap(), 20.0);
        assert_eq!(empirical_quantile(&small, 0.51).unwrap(), 30.0);
        assert_eq!(empirical_quantile(&small, 0.001).unwrap(), 10.0);
        assert_eq!(empirical_quantile(&small, 0.999).unwrap(), 40.0);
        assert!(empirical_quantile(&[], 0.5).is_err());
        assert!(empirical_quantile(&small, 0.0).is_err());
        assert!(empirical_quantile(&small, 1.0).is_err());
    }

    #[test]
    fn quantile_table_is_monotone_in_probability() {
        let params = LimitParams::new(0.5, 0.3536, 0.25).unwrap();
        let config = SamplerConfig {
            seed: 3,
            draws: 400,
            half_window: 60,
            ..SamplerConfig::default()
        };
        let probs = [0.025, 0.1, 0.5, 0.9, 0.975];
        let table = quantiles_boundary(&params, &config, &probs).unwrap();
        for pair in table.quantiles.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
        assert!(table.quantiles[0] < 0.0 && table.quantiles[4] > 0.0);
    }

    #[test]
    fn gaussian_halfwidth_matches_reference_values() {
        let v = gaussian_ci_halfwidth(0.5, 1.0 / 6.0, 1000, 1.0 / 6.0, 0.975).unwrap();
        assert!((v - 0.13498755171017324).abs() <= 1e-14);
        let v = gaussian_ci_halfwidth(1.0, 2.0, 4096, 0.25, 0.9).unwrap();
        assert!((v - 0.04004848642326877).abs() <= 1e-14);
        assert_eq!(
            gaussian_ci_halfwidth(1.0, 1.0, 1000, 0.2, 0.5).unwrap(),
            0.0
        );
        let lo = gaussian_ci_halfwidth(1.0, 1.0, 1000, 0.2, 0.025).unwrap();
        let hi = gaussian_ci_halfwidth(1.0, 1.0, 1000, 0.2, 0.975).unwrap();
        assert!((lo + hi).abs() <= 1e-15);
    }

    #[test]
    fn gaussian_halfwidth_rejects_fine_grids() {
        assert_eq!(
            gaussian_ci_halfwidth(1.0, 1.0, 1000, 1.0 / 3.0, 0.975).unwrap_err(),
            Error::WrongRegime { gamma: 1.0 / 3.0 }
        );
        assert!(gaussian_ci_halfwidth(1.0, 1.0, 1000, 0.5, 0.975).is_err());
        assert!(gaussian_ci_halfwidth(1.0, 1.0, 1000, 0.0, 0.975).is_err());
        assert!(gaussian_ci_halfwidth(1.0, 1.0, 0, 0.2, 0.975).is_err());
    }

    #[test]
    fn sampler_config_validation_rejects_degenerate_setups() {
        let params = LimitParams::new(1.0, 1.0, 1.0).unwrap();
        let bad = SamplerConfig {
            draws: 0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            boundary_draws(&params, &bad).unwrap_err(),
            Error::InvalidSamplerConfig { .. }
        ));
        let bad = SamplerConfig {
            half_window: 0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            boundary_draws(&params, &bad).unwrap_err(),
            Error::InvalidSamplerConfig { .. }
        ));
        let bad = SamplerConfig {
            fine_halfwidth: 2.0,
            ..SamplerConfig::default()
        };
        assert_eq!(
            chernoff_draws(1.0, 1.0, &bad).unwrap_err(),
            Error::LocalizationRisk
        );
        let bad = SamplerConfig {
            fine_step: 0.0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            chernoff_draws(1.0, 1.0, &bad).unwrap_err(),
            Error::InvalidSamplerConfig { .. }
        ));
        assert!(LimitParams::new(0.0, 1.0, 1.0).is_err());
        assert!(LimitParams::new(1.0, -1.0, 1.0).is_err());
        assert!(LimitParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn chernoff_batch_is_reproducible() {
        let config = SamplerConfig {
            seed: 11,
            draws: 8,
            fine_step: 0.05,
            fine_halfwidth: 12.0,
            ..SamplerConfig::default()
        };
        let a = chernoff_draws(0.5, 0.25, &config).unwrap();
        let b = chernoff_draws(0.5, 0.25, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        for v in &a {
            assert!(v.is_finite());
        }
    }
}
