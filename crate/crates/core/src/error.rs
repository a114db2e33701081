use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The closed forms are singular or undefined for this staggering.
    #[error("staggering eta = {eta} outside the analytic domain |eta| < 1")]
    Domain { eta: f64 },

    #[error("{what} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("site {site} has the wrong parity for this operation (expected {expected} site)")]
    SiteParity { site: usize, expected: &'static str },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("state dimension {got} does not match 2N = {expected}")]
    Dimension { got: usize, expected: usize },

    #[error("non-finite or negative time {0}")]
    BadTime(f64),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("phase factor modulus {modulus} differs from one")]
    PhaseModulus { modulus: f64 },

    #[error("norm drift {drift:e} exceeds hard limit; eigendecomposition is defective")]
    NormDrift { drift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
