use thiserror::Error;

/// Errors produced by the numerical routines and the command-line layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid vector family: {0}")]
    InvalidFamily(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A Gram (sub)matrix has an eigenvalue below the clamp threshold.
    #[error("degenerate Gram matrix: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    DegenerateGram { eigenvalue: f64, threshold: f64 },

    #[error("degenerate span: the spanning vectors are linearly dependent")]
    DegenerateSpan,

    #[error("subset count C({m},{k}) = {count} exceeds cap {cap}")]
    CapExceeded {
        m: usize,
        k: usize,
        count: u128,
        cap: u128,
    },

    #[error("non-positive input at position {index}: {value}")]
    NonPositiveInput { index: usize, value: f64 },

    #[error("zero denominator in {0}")]
    ZeroDenominator(String),

    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),

    #[error("infeasible interval at step {step}: lo {lo} > hi {hi}")]
    InfeasibleInterval { step: usize, lo: f64, hi: f64 },

    /// A constructed object failed the inequalities it was built to satisfy.
    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("bad shape: m = {m}, d = {d}")]
    BadShape { m: usize, d: usize },

    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
