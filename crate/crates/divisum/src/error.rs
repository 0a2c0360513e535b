use thiserror::Error;

/// Errors surfaced by the library. Numerical routines report the tolerance
/// they actually achieved so callers can decide whether to retry with looser
/// settings or larger cutoffs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be a positive integer")]
    NonPositive,

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("{what} = {value} exceeds table limit {limit}")]
    TableLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("divisor-function value overflows table width at n = {n} (k = {k})")]
    DivisorOverflow { n: u64, k: u32 },

    #[error("allocation of {bytes} bytes for {what} failed")]
    Allocation { what: &'static str, bytes: u64 },

    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureTolerance { achieved: f64, requested: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("exponential sum is not close to a real integer: re = {re}, im = {im}")]
    NotNearInteger { re: f64, im: f64 },

    #[error("shift argument ({num})/({den}) is not an integer for r1 = {r1}, r2 = {r2}, h = {h}")]
    NonIntegralShift {
        num: i64,
        den: i64,
        r1: u64,
        r2: u64,
        h: i64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cache format error: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
