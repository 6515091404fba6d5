//! Argument parsing and command dispatch for the `gridcs` binary.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 when input data cannot be
//! loaded or parsed, 3 when a computation fails on otherwise readable input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gridcs_core::ci::{
    adaptive_interval, oracle_interval_boundary, oracle_interval_chernoff,
    oracle_interval_gaussian, CiResult,
};
use gridcs_core::limits::{quantiles_boundary, LimitParams, SamplerConfig};
use gridcs_core::model::{
    bin, locate_anchor, naive_is_monotone, npmle, npmle_via_gcm, Anchor, BinnedCounts, GridSpec,
};
use gridcs_core::nuisance::NuisanceConfig;
use gridcs_core::rng::{derive_seed, substream};
use gridcs_core::Error;

use crate::io;
use crate::sim::{discretize_inspections, gaussian_proximity, generate_dataset, EventDist};

#[derive(Debug, Parser)]
#[command(
    name = "gridcs",
    version,
    about = "Monotone estimation and confidence intervals for current status data on a regular inspection grid"
)]
pub struct Cli {
    /// Worker threads for the coverage command (also: GRIDCS_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset plus a grid sidecar.
    Simulate(SimulateArgs),
    /// Fit the monotone distribution estimate to a dataset.
    Fit(FitArgs),
    /// Confidence interval for the distribution value at a point.
    Ci(CiArgs),
    /// Monte Carlo coverage study over a battery of scenarios.
    Coverage(CoverageArgs),
    /// Quantile table for the critical-regime limit family.
    Quantiles(QuantilesArgs),
    /// Distance of the rescaled limit family from the standard normal.
    Ecdf(EcdfArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Left end of the inspection window.
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// Right end of the inspection window.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Grid refinement exponent; the spacing is c * n^(-gamma).
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub gamma: f64,
    /// Grid scale constant.
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Number of observations.
    #[arg(long)]
    pub n: u64,
    /// Event-time law: uniform:LO:HI, exp:RATE, or point:AT.
    #[arg(long, default_value = "uniform:0:1", value_parser = parse_event)]
    pub event: EventDist,
    /// Master seed; the dataset matches replication 0 of a coverage run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path; a .meta.json sidecar is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

/// Where a command reads its data and how it learns the grid.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Raw observation CSV with an x,y header.
    #[arg(long, conflicts_with = "binned")]
    pub input: Option<PathBuf>,
    /// Pre-binned CSV with a t,inspections,responses header.
    #[arg(long)]
    pub binned: Option<PathBuf>,
    /// Left end of the grid, when no sidecar should be consulted.
    #[arg(long, requires = "b")]
    pub a: Option<f64>,
    /// Right end of the grid.
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
    /// Explicit grid spacing.
    #[arg(long, conflicts_with_all = ["gamma", "c"])]
    pub delta: Option<f64>,
    /// Grid refinement exponent, paired with --c; the sample size completes the rule.
    #[arg(long, requires = "c")]
    pub gamma: Option<f64>,
    /// Grid scale constant, paired with --gamma.
    #[arg(long, requires = "gamma")]
    pub c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output CSV for the fitted curve; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-check the fit against the convex-minorant route and fail on disagreement.
    #[arg(long)]
    pub check_gcm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CiMode {
    /// Estimate every nuisance quantity from the data.
    Adaptive,
    /// Closed-form interval for coarse grids, needs --alpha --c0 --gamma0.
    GaussianOracle,
    /// Simulated interval for fine grids, needs --alpha --beta.
    ChernoffOracle,
    /// Simulated interval for the critical regime, needs --alpha --beta --c0.
    BoundaryOracle,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Point whose distribution value the interval targets.
    #[arg(long, conflicts_with = "grid_index")]
    pub x0: Option<f64>,
    /// Target the distribution value at grid point L instead of at --x0.
    #[arg(long, value_name = "L")]
    pub grid_index: Option<usize>,
    /// Two-sided miscoverage level.
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = CiMode::Adaptive)]
    pub mode: CiMode,
    /// Monte Carlo draws behind the simulated quantiles.
    #[arg(long, default_value_t = 3000)]
    pub draws: usize,
    /// Half-width of the pooling window in the limit sampler.
    #[arg(long, default_value_t = 300)]
    pub half_window: usize,
    #[arg(long, default_value_t = 0)]
    pub sampler_seed: u64,
    /// Scales the mass threshold of the density window.
    #[arg(long, default_value_t = 1.0)]
    pub threshold_mult: f64,
    /// Known noise scale, for the oracle modes.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Known drift scale, for the oracle modes.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Known grid scale constant, for the oracle modes.
    #[arg(long)]
    pub c0: Option<f64>,
    /// Known grid refinement exponent, for the gaussian oracle.
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Output JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// Battery JSON: {"scenarios": [...]} or a single scenario object.
    #[arg(long)]
    pub config: PathBuf,
    /// Keep per-replication interval records in the report.
    #[arg(long)]
    pub records: bool,
    /// Output JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantilesArgs {
    /// Grid scale constant of the limit law.
    #[arg(long)]
    pub c: f64,
    /// Noise scale of the limit law.
    #[arg(long)]
    pub alpha: f64,
    /// Drift scale of the limit law.
    #[arg(long)]
    pub beta: f64,
    /// Probabilities for the table, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.025, 0.05, 0.5, 0.95, 0.975])]
    pub probs: Vec<f64>,
    #[arg(long, default_value_t = 3000)]
    pub draws: usize,
    #[arg(long, default_value_t = 300)]
    pub half_window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EcdfArgs {
    /// Noise scale of the limit law.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Drift scale of the limit law.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Grid scale constants to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 5.0, 10.0])]
    pub scales: Vec<f64>,
    #[arg(long, default_value_t = 5000)]
    pub draws: usize,
    #[arg(long, default_value_t = 300)]
    pub half_window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What went wrong, sorted by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Flag combinations clap cannot express statically; exits 1.
    Usage(String),
    /// Input files missing or malformed; exits 2.
    Data(anyhow::Error),
    /// Computation failed on readable input; exits 3.
    Numeric(anyhow::Error),
}

impl CliError {
    /// Prints the error to stderr and returns the matching exit code.
    pub fn report(&self) -> ExitCode {
        match self {
            Self::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Self::Data(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(2)
            }
            Self::Numeric(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(3)
            }
        }
    }
}

fn data_err(err: anyhow::Error) -> CliError {
    CliError::Data(err)
}

fn numeric_err<E: Into<anyhow::Error>>(err: E) -> CliError {
    CliError::Numeric(err.into())
}

/// Installs the global rayon pool when a thread count was requested.
pub fn configure_threads(flag: Option<usize>) {
    let requested = flag.or_else(|| {
        std::env::var("GRIDCS_THREADS")
            .ok()
            .and_then(|raw| raw.parse().ok())
    });
    if let Some(threads) = requested {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            log::warn!("thread pool already initialized: {err}");
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Ci(args) => cmd_ci(args),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Quantiles(args) => cmd_quantiles(args),
        Command::Ecdf(args) => cmd_ecdf(args),
    }
}

fn parse_event(raw: &str) -> Result<EventDist, String> {
    fn num(field: &str, raw: &str) -> Result<f64, String> {
        raw.parse()
            .map_err(|_| format!("{field} is not a number: {raw}"))
    }
    let parts: Vec<&str> = raw.split(':').collect();
    let dist = match parts.as_slice() {
        ["uniform", lo, hi] => EventDist::Uniform {
            lo: num("LO", lo)?,
            hi: num("HI", hi)?,
        },
        ["exp", rate] => EventDist::Exponential {
            rate: num("RATE", rate)?,
        },
        ["point", at] => EventDist::PointMass { at: num("AT", at)? },
        _ => return Err("expected uniform:LO:HI, exp:RATE, or point:AT".into()),
    };
    dist.validate()
        .map_err(|_| format!("degenerate event law: {raw}"))?;
    Ok(dist)
}

fn write_or_stdout(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(data_err),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn render_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .context("serializing report")
        .map(|body| body + "\n")
        .map_err(data_err)
}

/// Builds the grid from explicit flags, or falls back to the data sidecar.
fn resolve_grid(
    args: &InputArgs,
    data_path: &Path,
    records: Option<u64>,
) -> Result<GridSpec, CliError> {
    match (args.a, args.b, args.delta, args.gamma, args.c) {
        (Some(a), Some(b), Some(delta), None, None) => {
            GridSpec::from_spacing(a, b, delta).map_err(numeric_err)
        }
        (Some(a), Some(b), None, Some(gamma), Some(c)) => {
            let n = records.ok_or_else(|| {
                CliError::Usage(
                    "the --gamma/--c spacing rule needs the sample size; \
                     use --delta with pre-binned input"
                        .into(),
                )
            })?;
            build_design_grid(a, b, gamma, c, n)
        }
        (None, None, None, None, None) => io::read_meta(data_path)
            .map(|meta| meta.grid)
            .map_err(data_err),
        _ => Err(CliError::Usage(
            "grid flags are --a and --b with either --delta or both --gamma and --c".into(),
        )),
    }
}

/// Grid with spacing `c * n^(-gamma)` over `[a, b]`.
fn build_design_grid(a: f64, b: f64, gamma: f64, c: f64, n: u64) -> Result<GridSpec, CliError> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(numeric_err(Error::WrongRegime { gamma }));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(numeric_err(Error::InvalidScale));
    }
    if n == 0 {
        return Err(numeric_err(Error::InvalidSampleSize));
    }
    let delta = c * (n as f64).powf(-gamma);
    GridSpec::from_spacing(a, b, delta).map_err(numeric_err)
}

/// Loads observations or pre-binned counts, resolving the grid either way.
fn load_counts(args: &InputArgs) -> Result<(GridSpec, BinnedCounts), CliError> {
    match (&args.input, &args.binned) {
        (Some(path), None) => {
            let observations = io::read_observations(path).map_err(data_err)?;
            let grid = resolve_grid(args, path, Some(observations.times().len() as u64))?;
            let binned = bin(&grid, &observations)
                .map_err(|err| data_err(anyhow::Error::new(err).context("binning observations")))?;
            Ok((grid, binned))
        }
        (None, Some(path)) => {
            let grid = resolve_grid(args, path, None)?;
            let binned = io::read_binned(path, &grid).map_err(data_err)?;
            Ok((grid, binned))
        }
        (None, None) => Err(CliError::Usage(
            "one of --input or --binned is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --input with --binned"),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let grid = build_design_grid(args.a, args.b, args.gamma, args.c, args.n)?;
    let span = args.b - args.a;
    let probs = discretize_inspections(&grid, |x| ((x - args.a) / span).clamp(0.0, 1.0));
    let data_seed = derive_seed(args.seed, 0);
    let mut rng = substream(data_seed, 0);
    let observations = generate_dataset(&grid, &probs, &args.event, args.n, &mut rng);
    io::write_observations(&args.out, &observations).map_err(data_err)?;
    let meta = io::DatasetMeta {
        grid,
        event: Some(args.event),
        seed: Some(args.seed),
    };
    io::write_meta(&args.out, &meta).map_err(data_err)?;
    eprintln!(
        "wrote {} observations on {} grid points to {}",
        observations.times().len(),
        grid.k(),
        args.out.display()
    );
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let (grid, binned) = load_counts(&args.input)?;
    let fit = npmle(&binned).map_err(numeric_err)?;
    eprintln!(
        "n={} grid_points={} empty_bins={} naive_monotone={}",
        binned.n(),
        grid.k(),
        binned.empty_bins(),
        naive_is_monotone(&binned)
    );
    if args.check_gcm {
        let alt = npmle_via_gcm(&binned).map_err(numeric_err)?;
        let deviation = fit
            .levels()
            .iter()
            .zip(alt.levels())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        eprintln!("pool vs minorant max deviation {deviation:.3e}");
        if deviation > 1e-8 {
            return Err(CliError::Numeric(anyhow::anyhow!(
                "pool and minorant routes disagree by {deviation:e}"
            )));
        }
    }
    write_or_stdout(args.out.as_deref(), &io::render_fit(&fit))
}

fn cmd_ci(args: CiArgs) -> Result<(), CliError> {
    let (grid, binned) = load_counts(&args.input)?;
    let estimate = npmle(&binned).map_err(numeric_err)?;
    let anchor = match (args.x0, args.grid_index) {
        (Some(x0), None) => locate_anchor(&grid, x0).map_err(numeric_err)?,
        (None, Some(l)) => {
            if l < 1 || l >= grid.k() {
                return Err(CliError::Numeric(anyhow::anyhow!(
                    "grid index {l} outside 1..{}",
                    grid.k()
                )));
            }
            Anchor {
                l,
                r: l + 1,
                rho: 0.0,
            }
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --x0 or --grid-index is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --x0 with --grid-index"),
    };
    let sampler = SamplerConfig {
        seed: args.sampler_seed,
        draws: args.draws,
        half_window: args.half_window,
        ..SamplerConfig::default()
    };
    let n = binned.n();
    let center = estimate.level(anchor.l);
    let need = |flag: Option<f64>, name: &str| {
        flag.ok_or_else(|| CliError::Usage(format!("--{name} is required for this mode")))
    };
    let result = match args.mode {
        CiMode::Adaptive => {
            let nuisance_cfg = NuisanceConfig {
                threshold_mult: args.threshold_mult,
            };
            adaptive_interval(
                &binned,
                &estimate,
                &anchor,
                args.eta,
                &sampler,
                &nuisance_cfg,
            )
            .map_err(numeric_err)?
        }
        CiMode::GaussianOracle => {
            let alpha = need(args.alpha, "alpha")?;
            let c0 = need(args.c0, "c0")?;
            let gamma0 = need(args.gamma0, "gamma0")?;
            oracle_interval_gaussian(center, alpha, c0, n, gamma0, args.eta).map_err(numeric_err)?
        }
        CiMode::ChernoffOracle => {
            let alpha = need(args.alpha, "alpha")?;
            let beta = need(args.beta, "beta")?;
            oracle_interval_chernoff(center, alpha, beta, n, args.eta, &sampler)
                .map_err(numeric_err)?
        }
        CiMode::BoundaryOracle => {
            let alpha = need(args.alpha, "alpha")?;
            let beta = need(args.beta, "beta")?;
            let c0 = need(args.c0, "c0")?;
            let params = LimitParams::new(c0, alpha, beta).map_err(numeric_err)?;
            oracle_interval_boundary(center, &params, n, args.eta, &sampler).map_err(numeric_err)?
        }
    };
    report_interval(&result);
    write_or_stdout(args.out.as_deref(), &render_json(&result)?)
}

fn report_interval(result: &CiResult) {
    eprintln!(
        "[{:.6}, {:.6}] center {:.6} length {:.6} clamped {}",
        result.lower,
        result.upper,
        result.center,
        result.length(),
        result.clamped
    );
}

fn cmd_coverage(args: CoverageArgs) -> Result<(), CliError> {
    let battery = io::read_battery(&args.config).map_err(data_err)?;
    if battery.scenarios.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!(
            "battery {} holds no scenarios",
            args.config.display()
        )));
    }
    let mut reports = Vec::with_capacity(battery.scenarios.len());
    for spec in &battery.scenarios {
        let report = crate::sim::run_coverage(spec, args.records).map_err(|err| {
            CliError::Numeric(anyhow::Error::new(err).context(format!("scenario {}", spec.name())))
        })?;
        eprintln!(
            "{}: cover(P)={:.3} cover(T)={:.3} len(P)={:.4} len(T)={:.4} failures={}",
            spec.name(),
            report.coverage_practical,
            report.coverage_theoretical,
            report.mean_length_practical,
            report.mean_length_theoretical,
            report.failures
        );
        reports.push(report);
    }
    write_or_stdout(args.out.as_deref(), &render_json(&reports)?)
}

fn cmd_quantiles(args: QuantilesArgs) -> Result<(), CliError> {
    let params = LimitParams::new(args.c, args.alpha, args.beta).map_err(numeric_err)?;
    let config = SamplerConfig {
        seed: args.seed,
        draws: args.draws,
        half_window: args.half_window,
        ..SamplerConfig::default()
    };
    let table = quantiles_boundary(&params, &config, &args.probs).map_err(numeric_err)?;
    write_or_stdout(args.out.as_deref(), &render_json(&table)?)
}

fn cmd_ecdf(args: EcdfArgs) -> Result<(), CliError> {
    let rows = gaussian_proximity(
        args.alpha,
        args.beta,
        &args.scales,
        args.draws,
        args.half_window,
        args.seed,
    )
    .map_err(numeric_err)?;
    let mut body = String::from("c,ks\n");
    for (c, ks) in rows {
        body.push_str(&io::fmt_f64(c));
        body.push(',');
        body.push_str(&io::fmt_f64(ks));
        body.push('\n');
    }
    write_or_stdout(args.out.as_deref(), &body)
}
