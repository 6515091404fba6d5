//! Crate-wide error type.

use thiserror::Error;

/// Alias for results produced by this crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of estimation, sampling, and interval construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty series")]
    EmptySeries,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid weight at index {index}: weights must be finite and positive")]
    InvalidWeight { index: usize },
    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },
    #[error("diagram needs at least two points")]
    DegenerateDiagram,
    #[error("diagram abscissas must be strictly increasing at index {index}")]
    NonIncreasingAbscissa { index: usize },
    #[error("left slope undefined at {x}: outside the diagram's abscissa range")]
    SlopeUndefined { x: f64 },

    #[error("grid spacing must be positive and finite")]
    InvalidSpacing,
    #[error("grid interval is empty or not finite")]
    InvalidInterval,
    #[error("grid has no points inside the interval")]
    EmptyGrid,
    #[error("empty observation set")]
    EmptyObservations,
    #[error("observation {index} at {x} is off the grid")]
    OffGrid { index: usize, x: f64 },
    #[error("responses exceed counts at grid index {index}")]
    ResponseExceedsCount { index: usize },
    #[error("no observations to fit")]
    NoData,
    #[error("estimate and counts were built on different grids")]
    GridMismatch,
    #[error("time {t} outside the grid interval")]
    OutsideInterval { t: f64 },
    #[error("anchor {x0} outside the interior grid range [t_1, t_K)")]
    AnchorOutsideGrid { x0: f64 },

    #[error("scale parameter must be positive and finite")]
    InvalidScale,
    #[error("limit parameters must be positive and finite")]
    InvalidLimitParams,
    #[error("probability {p} outside (0, 1)")]
    InvalidProbability { p: f64 },
    #[error("sampler domain too narrow: localization risk")]
    LocalizationRisk,
    #[error("gaussian half-width needs a sparsity exponent in (0, 1/3), got {gamma}")]
    WrongRegime { gamma: f64 },
    #[error("sampler configuration invalid: {reason}")]
    InvalidSamplerConfig { reason: &'static str },

    #[error("nuisance window exhausted the grid before reaching the mass threshold")]
    WindowExhausted,
    #[error("estimate is flat across the whole grid: no local slope information")]
    FlatEstimate,
    #[error("estimated distribution value {value} yields a degenerate variance")]
    DegenerateAlpha { value: f64 },
    #[error("estimated observation density is not positive")]
    NonpositiveDensity,
    #[error("estimated local slope {value} is not positive")]
    NonpositiveSlope { value: f64 },
    #[error("degenerate regression window: no spread in the design points")]
    DegenerateWindow,

    #[error("miscoverage level {eta} outside (0, 1)")]
    InvalidLevel { eta: f64 },
    #[error("sample size must be positive")]
    InvalidSampleSize,
}
