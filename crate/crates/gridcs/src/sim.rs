//! Scenario-driven data generation and coverage studies.
//!
//! A scenario fixes the observation window, the event-time distribution,
//! the grid design `delta = c0 * n^{-gamma0}`, and the interval procedure's
//! knobs. Each replication draws inspection times uniformly from the grid's
//! discretized inspection law, thresholds fresh event times against them,
//! fits the monotone estimator, and builds two intervals that share their
//! Monte Carlo noise: the practical one with every limit parameter
//! estimated, and a benchmark one using the true local parameters.
//! Replications are seeded individually, so reports are reproducible and
//! independent of the number of worker threads.

use gridcs_core::ci::{adaptive_interval, compute_c_hat, oracle_interval_boundary, CiResult};
use gridcs_core::error::{Error, Result};
use gridcs_core::limits::{boundary_draws_from_bank, LimitParams, NoiseBank, SamplerConfig};
use gridcs_core::model::{
    bin, locate_anchor, naive_is_monotone, npmle, Anchor, GridSpec, ObservationSet,
};
use gridcs_core::normal::normal_cdf;
use gridcs_core::nuisance::NuisanceConfig;
use gridcs_core::rng::{derive_seed, substream};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::stats::ks_one_sample;

/// Event-time distribution families available to the generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EventDist {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
    },
    /// All mass at a single time; useful for exercising degenerate fits.
    PointMass {
        at: f64,
    },
}

impl EventDist {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::PointMass { at } => {
                if x >= *at {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Inverse distribution function; maps `u` in `[0, 1)` to an event time.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            Self::Uniform { lo, hi } => lo + u * (hi - lo),
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
            Self::PointMass { at } => *at,
        }
    }

    /// Density where one exists; the point mass reports zero everywhere.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::Uniform { lo, hi } => {
                if (*lo..=*hi).contains(&x) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::PointMass { .. } => 0.0,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && hi > lo,
            Self::Exponential { rate } => rate.is_finite() && *rate > 0.0,
            Self::PointMass { at } => at.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLimitParams)
        }
    }
}

fn default_eta() -> f64 {
    0.05
}

fn default_draws() -> usize {
    1000
}

fn default_half_window() -> usize {
    300
}

fn default_threshold_mult() -> f64 {
    1.0
}

/// A complete description of one simulation setting.
///
/// Inspection times are uniform over `[a, b]`, discretized to the grid
/// `delta = c0 * n^{-gamma0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub label: Option<String>,
    pub a: f64,
    pub b: f64,
    /// Point whose distribution value the intervals target.
    pub x0: f64,
    pub event: EventDist,
    /// Grid refinement exponent.
    pub gamma0: f64,
    /// Grid scale constant.
    pub c0: f64,
    /// Observations per replication.
    pub n: u64,
    /// Number of replications.
    pub reps: u32,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default)]
    pub seed: u64,
    /// Monte Carlo draws behind each interval's quantiles.
    #[serde(default = "default_draws")]
    pub draws: usize,
    /// Truncation half-width of the critical-regime sampler.
    #[serde(default = "default_half_window")]
    pub half_window: usize,
    #[serde(default = "default_threshold_mult")]
    pub threshold_mult: f64,
}

impl ScenarioSpec {
    /// Human-readable identifier for report tables.
    pub fn name(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        let family = match self.event {
            EventDist::Uniform { lo, hi } => format!("uniform[{lo},{hi}]"),
            EventDist::Exponential { rate } => format!("exp({rate})"),
            EventDist::PointMass { at } => format!("point({at})"),
        };
        format!(
            "{family} gamma0={} c0={} n={}",
            self.gamma0, self.c0, self.n
        )
    }

    /// The grid this scenario's design implies.
    pub fn build_grid(&self) -> Result<GridSpec> {
        if !(self.gamma0.is_finite() && self.gamma0 > 0.0) {
            return Err(Error::WrongRegime { gamma: self.gamma0 });
        }
        if !(self.c0.is_finite() && self.c0 > 0.0) {
            return Err(Error::InvalidScale);
        }
        if self.n == 0 {
            return Err(Error::InvalidSampleSize);
        }
        let delta = self.c0 * (self.n as f64).powf(-self.gamma0);
        GridSpec::from_spacing(self.a, self.b, delta)
    }

    fn sampler_for(&self, seed: u64) -> SamplerConfig {
        SamplerConfig {
            seed,
            draws: self.draws,
            half_window: self.half_window,
            ..SamplerConfig::default()
        }
    }

    /// True limit parameters at the anchor under this scenario, when they
    /// are nondegenerate: uniform inspections give density `1/(b-a)`, and
    /// the drift scale is half the event density.
    pub fn true_limit_params(&self, grid: &GridSpec, anchor: &Anchor) -> Option<LimitParams> {
        let c_hat = compute_c_hat(grid, self.n).ok()?;
        let t_l = grid.point(anchor.l);
        let f = self.event.cdf(t_l);
        let g = 1.0 / (self.b - self.a);
        let slope = self.event.density(t_l);
        let alpha_sq = f * (1.0 - f) / g;
        LimitParams::new(c_hat, alpha_sq.sqrt(), slope / 2.0).ok()
    }
}

/// Per-grid-point inspection probabilities for a continuous inspection law.
///
/// The first point takes all mass up to `t_1` and the last all mass beyond
/// `t_{K-1}`, so the probabilities sum to one exactly for any distribution
/// supported on `[a, b]`.
pub fn discretize_inspections<F: Fn(f64) -> f64>(grid: &GridSpec, cdf: F) -> Vec<f64> {
    let k = grid.k();
    let mut probs = Vec::with_capacity(k);
    if k == 1 {
        probs.push(1.0);
        return probs;
    }
    probs.push(cdf(grid.point(1)));
    for i in 2..k {
        probs.push(cdf(grid.point(i)) - cdf(grid.point(i - 1)));
    }
    probs.push(1.0 - cdf(grid.point(k - 1)));
    probs
}

/// Draws one dataset: each record consumes one uniform for its inspection
/// point and one for its event time, in that order.
pub fn generate_dataset<R: Rng + ?Sized>(
    grid: &GridSpec,
    probs: &[f64],
    event: &EventDist,
    n: u64,
    rng: &mut R,
) -> ObservationSet {
    let cumulative: Vec<f64> = probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let mut times = Vec::with_capacity(n as usize);
    let mut events = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let idx = cumulative.partition_point(|c| *c < u).min(grid.k() - 1);
        let t = grid.point(idx + 1);
        let x = event.quantile(rng.gen());
        times.push(t);
        events.push(x <= t);
    }
    ObservationSet::new(times, events).expect("generated records are valid")
}

/// One interval's endpoints and whether it covered the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lower: f64,
    pub upper: f64,
    pub covered: bool,
}

impl IntervalRecord {
    fn from_ci(ci: &CiResult, target: f64) -> Self {
        Self {
            lower: ci.lower,
            upper: ci.upper,
            covered: ci.contains(target),
        }
    }
}

/// Everything recorded about one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: u32,
    /// Whether the raw response means were already nondecreasing.
    pub naive_monotone: bool,
    pub practical: Option<IntervalRecord>,
    pub theoretical: Option<IntervalRecord>,
    /// Why the practical interval was not produced, when it was not.
    pub failure: Option<String>,
}

/// Aggregated results of a coverage study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub scenario: ScenarioSpec,
    pub grid_points: usize,
    pub c_hat: f64,
    /// True distribution value the intervals target.
    pub target: f64,
    /// Replications in the averages: those where the practical interval
    /// exists. The benchmark is averaged over the same set.
    pub reps_used: u32,
    pub failures: u32,
    pub naive_monotone_rate: f64,
    pub coverage_practical: f64,
    pub mean_length_practical: f64,
    pub coverage_theoretical: f64,
    pub mean_length_theoretical: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<RepRecord>>,
}

fn run_rep(
    spec: &ScenarioSpec,
    grid: &GridSpec,
    probs: &[f64],
    anchor: &Anchor,
    target: f64,
    truth: Option<&LimitParams>,
    rep: u32,
) -> RepRecord {
    let data_seed = derive_seed(spec.seed, rep as u64);
    let mut rng = substream(data_seed, 0);
    let observations = generate_dataset(grid, probs, &spec.event, spec.n, &mut rng);
    let binned = bin(grid, &observations).expect("generated times lie on the grid");
    let naive_monotone = naive_is_monotone(&binned);
    let sampler = spec.sampler_for(derive_seed(data_seed, 1));

    let mut record = RepRecord {
        rep,
        naive_monotone,
        practical: None,
        theoretical: None,
        failure: None,
    };
    let estimate = match npmle(&binned) {
        Ok(est) => est,
        Err(err) => {
            record.failure = Some(err.to_string());
            return record;
        }
    };
    if let Some(params) = truth {
        let center = estimate.level(anchor.l);
        let ci = oracle_interval_boundary(center, params, spec.n, spec.eta, &sampler)
            .expect("benchmark interval with valid parameters");
        record.theoretical = Some(IntervalRecord::from_ci(&ci, target));
    }
    let nuisance_cfg = NuisanceConfig {
        threshold_mult: spec.threshold_mult,
    };
    match adaptive_interval(
        &binned,
        &estimate,
        anchor,
        spec.eta,
        &sampler,
        &nuisance_cfg,
    ) {
        Ok(ci) => record.practical = Some(IntervalRecord::from_ci(&ci, target)),
        Err(err) => record.failure = Some(err.to_string()),
    }
    record
}

/// Runs the full coverage study for one scenario.
///
/// Replications are distributed over the rayon pool and collected in
/// order, so the report does not depend on the thread count.
pub fn run_coverage(spec: &ScenarioSpec, keep_records: bool) -> Result<CoverageReport> {
    if spec.reps == 0 {
        return Err(Error::InvalidSamplerConfig {
            reason: "reps must be positive",
        });
    }
    spec.event.validate()?;
    let grid = spec.build_grid()?;
    let anchor = locate_anchor(&grid, spec.x0)?;
    let probs = discretize_inspections(&grid, |x| {
        ((x - spec.a) / (spec.b - spec.a)).clamp(0.0, 1.0)
    });
    let target = spec.event.cdf(grid.point(anchor.l));
    let truth = spec.true_limit_params(&grid, &anchor);
    let c_hat = compute_c_hat(&grid, spec.n)?;

    let records: Vec<RepRecord> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| run_rep(spec, &grid, &probs, &anchor, target, truth.as_ref(), rep))
        .collect();

    let mut used = 0u32;
    let mut naive = 0u32;
    let (mut cover_p, mut cover_t) = (0u32, 0u32);
    let (mut len_p, mut len_t) = (0.0f64, 0.0f64);
    for record in &records {
        if record.naive_monotone {
            naive += 1;
        }
        let Some(practical) = &record.practical else {
            continue;
        };
        used += 1;
        cover_p += u32::from(practical.covered);
        len_p += practical.upper - practical.lower;
        if let Some(theoretical) = &record.theoretical {
            cover_t += u32::from(theoretical.covered);
            len_t += theoretical.upper - theoretical.lower;
        }
    }
    let den = used as f64;
    let have_truth = truth.is_some();
    Ok(CoverageReport {
        scenario: spec.clone(),
        grid_points: grid.k(),
        c_hat,
        target,
        reps_used: used,
        failures: spec.reps - used,
        naive_monotone_rate: naive as f64 / spec.reps as f64,
        coverage_practical: cover_p as f64 / den,
        mean_length_practical: len_p / den,
        coverage_theoretical: if have_truth {
            cover_t as f64 / den
        } else {
            f64::NAN
        },
        mean_length_theoretical: if have_truth { len_t / den } else { f64::NAN },
        records: keep_records.then_some(records),
    })
}

/// Fraction of replications whose raw response means need no pooling.
///
/// Uses the same per-replication data seeds as [`run_coverage`].
pub fn naive_ordering_rate(spec: &ScenarioSpec) -> Result<f64> {
    if spec.reps == 0 {
        return Err(Error::InvalidSamplerConfig {
            reason: "reps must be positive",
        });
    }
    spec.event.validate()?;
    let grid = spec.build_grid()?;
    let probs = discretize_inspections(&grid, |x| {
        ((x - spec.a) / (spec.b - spec.a)).clamp(0.0, 1.0)
    });
    let monotone: u32 = (0..spec.reps)
        .into_par_iter()
        .map(|rep| {
            let data_seed = derive_seed(spec.seed, rep as u64);
            let mut rng = substream(data_seed, 0);
            let observations = generate_dataset(&grid, &probs, &spec.event, spec.n, &mut rng);
            let binned = bin(&grid, &observations).expect("generated times lie on the grid");
            u32::from(naive_is_monotone(&binned))
        })
        .sum();
    Ok(monotone as f64 / spec.reps as f64)
}

/// Distance of the rescaled critical-regime law from the standard normal,
/// per scale value.
///
/// All scales share one noise bank, so the computed distances move together
/// and their ordering reflects the scale effect rather than sampling noise.
pub fn gaussian_proximity(
    alpha: f64,
    beta: f64,
    scales: &[f64],
    draws: usize,
    half_window: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let bank = NoiseBank::standard_normal(seed, draws, 2 * half_window + 1);
    let mut out = Vec::with_capacity(scales.len());
    for &c in scales {
        let params = LimitParams::new(c, alpha, beta)?;
        let sample = boundary_draws_from_bank(&params, half_window, &bank)?;
        let rescale = c.sqrt() / alpha;
        let standardized: Vec<f64> = sample.iter().map(|s| s * rescale).collect();
        out.push((c, ks_one_sample(&standardized, normal_cdf)));
    }
    Ok(out)
}

/// A list of scenarios to run back to back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    pub scenarios: Vec<ScenarioSpec>,
}
