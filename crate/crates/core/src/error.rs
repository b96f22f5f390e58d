use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("matrix is not unimodular (determinant {det})")]
    NonUnimodular { det: BigInt },
    #[error("form is not definite (discriminant {discriminant})")]
    NotDefinite { discriminant: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopographError {
    #[error("descent needs three positive values, got {0:?}")]
    NotAllPositive([BigInt; 3]),
    #[error("river did not close or reach a lake within {cap} steps")]
    PeriodCapExceeded { cap: usize },
    #[error("lake-adjacent values must differ (both are {0})")]
    EqualValues(BigInt),
    #[error("river tracing needs both a positive and a negative value")]
    NotARiver,
    #[error("render depth {depth} exceeds the maximum of {max}")]
    DepthExceeded { depth: u32, max: u32 },
    #[error("cannot parse invariant {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("p and q must be coprime, got ({p}, {q})")]
    NotCoprime { p: BigInt, q: BigInt },
    #[error("p and q must be nonzero")]
    ZeroParameter,
    #[error("v0 and v1 are congruent up to sign modulo {u}")]
    CongruentInputs { u: BigInt },
    #[error("modulus must be a positive even integer, got {0}")]
    InvalidModulus(BigInt),
    #[error(transparent)]
    Topograph(#[from] TopographError),
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("scan needs coprime p, q > 1, got ({p}, {q})")]
    InvalidPanel { p: i64, q: i64 },
    #[error("empty range {0}")]
    EmptyRange(&'static str),
    #[error("cell (k={k}, n={n}): {source}")]
    Cell {
        k: i64,
        n: i64,
        #[source]
        source: SeifertError,
    },
    #[error("cell (k={k}, n={n}): Q0 is {q0} but Q1 is {q1}")]
    TypeMismatch {
        k: i64,
        n: i64,
        q0: &'static str,
        q1: &'static str,
    },
    #[error("cells ({0}, {1}) and ({2}, {3}) are related by {4} but disagree")]
    SymmetryViolation(i64, i64, i64, i64, &'static str),
    #[error("grid is missing cell (k={k}, n={n})")]
    IncompleteGrid { k: i64, n: i64 },
    #[error("malformed {what} at line {line}: {detail}")]
    Malformed {
        what: &'static str,
        line: usize,
        detail: String,
    },
    #[error("cache was written for {found}, expected {expected}")]
    CacheMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}
