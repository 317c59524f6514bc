use thiserror::Error;

/// Errors raised by the numerical routines and analyzers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HbError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation overflow: requested size {requested} exceeds cap {cap}")]
    TruncationOverflow { requested: usize, cap: usize },

    #[error("log-integrability failure: {0}")]
    LogIntegrability(String),

    #[error("trigonometric polynomial is negative (min {min:e})")]
    NotNonnegative { min: f64 },

    #[error("numerical failure: {message} (residual {residual:e})")]
    Numerical { message: String, residual: f64 },

    #[error("extreme or degenerate symbol: {0}")]
    ExtremeDegenerate(String),

    #[error("convergence failure: last values {previous:e} and {last:e}")]
    Convergence { previous: f64, last: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("diagnostics inconsistency: {0}")]
    Diagnostics(String),

    #[error("resonance: |1 - conj(alpha) b| fell to {min_modulus:e}")]
    Resonance { min_modulus: f64 },

    #[error("boundary root classification ambiguous; root moduli {moduli:?}")]
    Snapping { moduli: Vec<f64> },

    #[error("weighting error: {0}")]
    Weighting(String),

    #[error("admissibility not declared: {0}")]
    Admissibility(String),

    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("parameter `{name}` out of range: {reason}")]
    Parameter { name: String, reason: String },
}

pub type Result<T> = std::result::Result<T, HbError>;
