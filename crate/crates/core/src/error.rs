use thiserror::Error;

/// Errors raised by field construction, quadrature and operator routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("observation point at distance {distance} lies inside the source exclusion radius {exclusion}")]
    Singularity { distance: f64, exclusion: f64 },

    #[error("detector radius {radius} is below the far-field threshold {required}")]
    FarFieldViolation { radius: f64, required: f64 },

    #[error("Fock space dimension {dimension} exceeds the limit {limit}")]
    DimensionOverflow { dimension: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("overlap magnitude {0} exceeds 1")]
    InvalidOverlap(f64),

    #[error("coherent-state truncation tail {tail:e} exceeds the limit {limit:e}")]
    TruncationTail { tail: f64, limit: f64 },

    #[error("expectation value has imaginary residue {residue:e} (allowed {allowed:e})")]
    NonHermitian { residue: f64, allowed: f64 },

    #[error("wavepacket components are not collinear")]
    NonCollinear,

    #[error("missing settings: {}", .0.join(", "))]
    MissingSettings(Vec<String>),

    #[error("at least {required} points are needed, got {found}")]
    TooFewPoints { required: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
