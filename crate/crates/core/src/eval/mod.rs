//! Evaluation against observed usage, plus descriptive network statistics.

pub mod correlation;
pub mod grid;
pub mod powerlaw;
pub mod usage;

use alloc::string::String;

pub use correlation::{average_ranks, correlation, pearson, Correlation};
pub use grid::{
    grid_search, CellStatus, CorrelationTarget, GridResult, GridRow, GridSpec, STANDARD_ALPHAS, STANDARD_TAUS,
};
pub use powerlaw::{fit_power_law, log_histogram, HistogramBin, PowerLawFit};
pub use usage::{join_usage, JoinedPairs, UsageJoin, UsageKind, UsageTable};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no dataset ids shared by graph and usage table ({unmatched_usage} usage ids unmatched, {unmatched_datasets} graph datasets unmatched)")]
    EmptyIntersection {
        unmatched_usage: usize,
        unmatched_datasets: usize,
    },
    #[error("correlation needs at least 3 pairs, got {0}")]
    InsufficientPairs(usize),
    #[error("zero variance on one side of the pairs")]
    DegenerateVariance,
    #[error("duplicate usage id `{0}`")]
    DuplicateId(String),
    #[error("power-law fit needs at least 3 occupied bins, got {occupied_bins}")]
    InsufficientData { occupied_bins: usize },
    #[error("power-law fit requires positive finite values, got {0}")]
    NonPositiveValue(f64),
    #[error("bin count must be positive")]
    InvalidBins,
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("score vector has length {got}, graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
}
