use thiserror::Error;

/// Errors produced by the exact-arithmetic layers and the spectral certifier.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("coarsening unsupported: requested level {requested} below current level {current}")]
    CoarseningUnsupported { current: u32, requested: u32 },

    #[error("insufficient resolution: operation needs level >= {needed}, got {got}")]
    InsufficientResolution { needed: u32, got: u32 },

    #[error("index 0 is excluded (the constant function lives outside the enumeration)")]
    ZeroIndexExcluded,

    #[error("index {n} out of range {lo}..{hi}")]
    IndexOutOfRange { n: u64, lo: u64, hi: u64 },

    #[error("operation requires a zero-mean input")]
    NonzeroMean,

    #[error("spline order must be >= 1 (order 0 is the Haar generator)")]
    InvalidSplineOrder,

    #[error("input function must be nonzero")]
    ZeroFunction,

    #[error("system of functions must be nonempty")]
    EmptySystem,

    #[error("eigensolver did not converge: best off-diagonal residual {residual}")]
    EigenNoConvergence { residual: f64 },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed serialized data: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
