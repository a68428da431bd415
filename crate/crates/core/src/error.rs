use thiserror::Error;

/// Errors raised by signal generation, window selection, the estimators and
/// the Monte Carlo harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signal model: {0}")]
    InvalidModel(String),

    #[error("invalid sampling range: {0}")]
    InvalidRange(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("SNR is undefined for a noise level of {0}")]
    UndefinedSnr(f64),

    #[error("peak amplitude {peak} is below the selection threshold {threshold}")]
    EmptyWindow { peak: f64, threshold: f64 },

    #[error("selected window holds {len} samples, at least 3 are required")]
    TooFewSamples { len: usize },

    #[error("degenerate window: amplitude sum {0} is too close to zero")]
    DegenerateWindow(f64),

    #[error("all bracketing segments are flat, the least-squares step is undefined")]
    FlatSpectrum,

    #[error("no mirrored sample falls inside the window")]
    NoOverlap,

    #[error("internal logic error: {0}")]
    InternalLogic(String),

    #[error("invalid iteration config: {0}")]
    InvalidIteration(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("every trial in cell (rate {rate}, sigma_n {sigma_n}, multiplier {multiplier}) failed for {estimator}")]
    EmptyCell {
        rate: f64,
        sigma_n: f64,
        multiplier: f64,
        estimator: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
