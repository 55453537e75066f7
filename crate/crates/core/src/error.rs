use thiserror::Error;

/// Errors produced by the GT computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GtError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("hazard diverges at t = 0 for shape {shape}")]
    Singularity { shape: f64 },

    #[error("horizon beyond representable survival at t = {t}")]
    SurvivalUnderflow { t: f64 },

    #[error("degenerate horizon T = {horizon}: F(T) must lie strictly between 0 and 1")]
    DegenerateHorizon { horizon: f64 },

    #[error("quadrature did not converge; best estimate {estimate}")]
    NonConvergence { estimate: f64 },

    #[error("degenerate curve: terminal value must be positive")]
    DegenerateCurve,

    #[error("malformed sample: {0}")]
    MalformedSample(String),
}

pub type Result<T> = std::result::Result<T, GtError>;
