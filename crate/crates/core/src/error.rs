use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is a perfect square")]
    SquareInput(u64),

    #[error("bisection did not converge after {steps} steps (u = {u}, alpha = {alpha})")]
    NonConvergence { steps: usize, u: f64, alpha: f64 },

    #[error("boundary comparison for D = {d} is ambiguous at maximum precision")]
    BoundaryAmbiguous { d: u64 },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{omega} is not a root of x^2 = 1 mod {u}^2")]
    NotARoot { omega: u64, u: u64 },

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("Poisson truncation insufficient: deviation {deviation:e} with {terms} terms")]
    Truncation { deviation: f64, terms: i64 },

    #[error("cache version mismatch: expected `pellcache v1`, found `{0}`")]
    CacheVersion(String),

    #[error("cache line {line}: {reason}")]
    CacheLine { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
