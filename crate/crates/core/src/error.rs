use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("exponents are not strictly increasing at n = {n}")]
    NotIncreasing { n: usize },
    #[error("denominator lcm exceeds cap {cap} at row {row}")]
    DenominatorCap { row: usize, cap: u64 },
    #[error("basis of length {len} does not cover row {n} (needs generator {generator})")]
    BasisTooShort { n: usize, generator: usize, len: usize },
    #[error("row is not integral after scaling by the common denominator")]
    NonIntegralRow,
    #[error("non-integral Bohr matrix: {0}")]
    NonIntegral(String),
    #[error("operation requires a Bohr basis but the exponents are explicit")]
    NoBasis,
    #[error("twist vector of length {len} does not cover row {n}: generator {generator} is unset")]
    TwistTooShort { n: usize, generator: usize, len: usize },
    #[error("accuracy {requested:e} unreachable: best tail bound {achieved:e} at M = {m}")]
    AccuracyUnreachable { requested: f64, achieved: f64, m: usize },
    #[error("Re(s) = {sigma} is not above the convergence threshold {threshold}")]
    BelowThreshold { sigma: f64, threshold: f64 },
    #[error("coefficient list has {have} entries but {need} are required")]
    MissingCoefficients { have: usize, need: usize },
    #[error("sequence too short: {0}")]
    InsufficientSequence(String),
    #[error("function is near zero on the contour (min |F| = {min_abs:e})")]
    NearZeroOnContour { min_abs: f64 },
    #[error("budget exhausted after {evaluations} evaluations")]
    BudgetExhausted { evaluations: u64 },
    #[error("series are not vector-equivalent: {0}")]
    Incompatible(String),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
