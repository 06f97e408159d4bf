use thiserror::Error;

/// Errors reported by construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spatial dimension must be >= 1, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("direction vector must have unit norm, got |omega| = {0}")]
    NotUnitNorm(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid annulus: need 0 < r_min < r_max < box halfwidth, got r_min = {r_min}, r_max = {r_max}, halfwidth = {halfwidth}")]
    InvalidAnnulus {
        r_min: f64,
        r_max: f64,
        halfwidth: f64,
    },

    #[error("weight '{label}' is not positive at r = {r}: w(r) = {value}")]
    NonPositiveWeight {
        label: String,
        r: f64,
        value: f64,
    },

    #[error("weight '{label}': analytic derivative d{order} disagrees with finite differences at r = {r} (relative error {rel_err:.3e})")]
    DerivativeMismatch {
        label: String,
        order: u8,
        r: f64,
        rel_err: f64,
    },

    #[error("radius samples must be non-empty and positive")]
    EmptySamples,

    #[error("weight pair '{0}' does not carry the half-power pairing b = r^(1/2) a required here")]
    HalfPowerRequired(String),

    #[error("degenerate power weight: tau = 2k - n for k = {k} (tau = {tau}, n = {n}); the estimate requires tau != 2k - n for all integers k")]
    DegenerateTau { tau: f64, n: usize, k: i64 },

    #[error("field is not spectrally resolved: high-frequency tail {tail:.3e} exceeds {threshold:.3e}")]
    Unresolved { tail: f64, threshold: f64 },

    #[error("null field: the weighted norm in the denominator vanishes")]
    NullField,

    #[error("non-finite sample encountered: {0}")]
    NonFiniteSample(String),

    #[error("unknown inequality id '{0}'")]
    UnknownInequality(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
