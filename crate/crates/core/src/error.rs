use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet size {0}; expected 1..=255")]
    InvalidAlphabet(usize),
    #[error("symbol {symbol} outside alphabet of size {size}")]
    InvalidSymbol { symbol: u32, size: usize },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("index {index} out of range (available {available})")]
    OutOfRange { index: i64, available: usize },
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("word too short: {0}")]
    TooShort(String),
    #[error("value {0} outside the domain")]
    OutOfDomain(f64),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("value {0} outside the image")]
    OutOfImage(f64),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("relation constraint violated at position {position}")]
    ConstraintViolation { position: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("window mismatch: [{0}, {1}] vs [{2}, {3}]")]
    WindowMismatch(i64, i64, i64, i64),
    #[error("seam pair ({0}, {1}) is not in the relation")]
    SeamViolation(f64, f64),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("no witness within bound {bound}; best error {best_error}")]
    WitnessNotFound { bound: u64, best_error: f64 },
    #[error("enumeration needs {needed} nodes, budget is {budget}")]
    BudgetExceeded { needed: f64, budget: u64 },
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),
    #[error("induced map is not compatible with the quotient: {0}")]
    NotCompatible(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
