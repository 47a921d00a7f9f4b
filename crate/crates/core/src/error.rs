use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dim must be ≥ 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("quadrature dimension must be in 2..={max} (got {dim})")]
    QuadratureDimension { dim: usize, max: usize },
    #[error("dimension 7 quadrature needs {0} points per run; enable it explicitly")]
    QuadratureTooLarge(u64),
    #[error("nodes_per_axis must be ≥ 4 (got {0})")]
    TooFewNodes(usize),
    #[error("semi-interquartile range must be positive and finite (got {0})")]
    InvalidSiqr(f64),
    #[error("disorder target {target} is not available for a real-field state")]
    TargetNotReal { target: &'static str },
    #[error("configs_per_state must be ≥ 1")]
    NoConfigs,
    #[error("NaN cannot be ingested")]
    NanInput,
    #[error("value {0} lies outside the histogram range [0, 1]")]
    OutOfRange(f64),
    #[error("accumulator is empty")]
    Empty,
    #[error("accumulator has no histogram (raw mode)")]
    NoHistogram,
    #[error("need at least {needed} values (got {got})")]
    TooFewValues { needed: usize, got: usize },
    #[error("standard deviation is zero; skewness is undefined")]
    SkewnessUndefined,
    #[error("exponential fit needs at least 4 points (got {0})")]
    TooFewPoints(usize),
    #[error("no states of the {pool}-state pool fell in the window around M_in = {m_in}; use a larger pool")]
    EmptyWindow { m_in: f64, pool: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
