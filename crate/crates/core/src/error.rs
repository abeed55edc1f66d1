use thiserror::Error;

use crate::interval::{Interval, IntervalError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("parameter {name} = {value} lies outside the parameter space")]
    OutOfParameterSpace { name: &'static str, value: Interval },
    #[error("chain is degenerate: l1 = {l1}, l2 = {l2}")]
    DegenerateChain { l1: Interval, l2: Interval },
    #[error("Steiner trees are supported for 2 to 4 terminals, got {0}")]
    UnsupportedCount(usize),
    #[error("oracle did not converge after {iters} iterations")]
    NonConvergence { iters: usize },
    #[error("malformed certificate record at line {line}: {msg}")]
    MalformedRecord { line: usize, msg: String },
    #[error("claim mismatch at line {line}: {msg}")]
    ClaimMismatch { line: usize, msg: String },
    #[error("partition check failed: {0}")]
    PartitionFailure(String),
    #[error("{function} is not admissible at center {c}")]
    DomainConstraintViolated { function: &'static str, c: Interval },
    #[error("range condition could not be verified: {step}")]
    RangeConditionUnverifiable { step: String },
    #[error("product of bounds whose lower side is not certified non-negative")]
    NegativityUnderMul,
    #[error("case {case}: {msg}")]
    CertificationFailed { case: &'static str, msg: String },
    #[error("enclosure {0} is too wide")]
    EnclosureTooWide(Interval),
    #[error("r = {r} exceeds min(width, height)/20 = {limit}")]
    RTooLarge { r: f64, limit: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
