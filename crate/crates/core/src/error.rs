use thiserror::Error;

use crate::mmspace::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid distribution function: {0}")]
    InvalidCdf(String),

    #[error("distribution function never attains 0; the generalized inverse is unbounded below")]
    NoZero,

    #[error("source distribution must be continuous and strictly increasing on its support: {0}")]
    SourceNotContinuous(String),

    #[error("invalid metric measure space: {0}")]
    InvalidSpace(Violation),

    #[error("function is not 1-Lipschitz: |f({i}) - f({j})| = {gap} > d = {dist}")]
    NotLipschitz { i: usize, j: usize, gap: f64, dist: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("diameters differ: {0} vs {1}")]
    DiameterMismatch(f64, f64),

    #[error("witness does not certify the claimed dominance: {0}")]
    InvalidWitness(String),

    #[error("search budget exceeded: needs {needed}, budget {budget}")]
    BudgetExceeded { needed: f64, budget: f64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unknown observable `{0}`")]
    UnknownObservable(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
