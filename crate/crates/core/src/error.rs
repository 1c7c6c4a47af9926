use thiserror::Error;

use crate::metric::MetricViolation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot read number {token:?}: {reason}")]
    Number { token: String, reason: String },

    #[error("distance matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("{labels} labels given for a {n}x{n} matrix")]
    LabelCount { labels: usize, n: usize },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("empty point set")]
    Empty,

    #[error("not a metric: {0}")]
    NotMetric(MetricViolation),

    #[error("points must be distinct (got {0} twice)")]
    SamePoint(usize),

    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("graph is disconnected: no path from {from:?} to {to:?}")]
    Disconnected { from: String, to: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{operation} needs at least {min} points, got {n}")]
    TooFewPoints {
        operation: &'static str,
        min: usize,
        n: usize,
    },

    #[error("{operation} is capped at n <= {cap}, got {n}")]
    CapExceeded {
        operation: &'static str,
        cap: usize,
        n: usize,
    },

    #[error("generator {kind:?} gave up after {attempts} attempts")]
    RetryBudgetExhausted { kind: String, attempts: usize },

    #[error("invalid generator settings: {0}")]
    InvalidGenerator(String),

    #[error("unknown {registry} {name:?} (known: {known})")]
    Unknown {
        registry: &'static str,
        name: String,
        known: String,
    },

    #[error("malformed input at line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
