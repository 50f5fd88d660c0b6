use thiserror::Error;

use crate::lfp::LfpResult;
use crate::local_search::{CongestionRun, HopfieldRun};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Work completed before a step or iteration cap stopped a driver.
#[derive(Debug, Clone)]
pub enum Partial {
    Hopfield(HopfieldRun),
    Congestion(CongestionRun),
    Lfp(LfpResult),
    None,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("{what} of size {size} exceeds cap {cap}")]
    SizeCapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("intermediate value needs {bits} bits, cap is {cap}")]
    BitCapExceeded { bits: u64, cap: u64 },
    #[error("step cap {cap} exceeded")]
    StepCapExceeded { cap: usize, partial: Box<Partial> },
    #[error("iteration cap {cap} exceeded")]
    IterCapExceeded { cap: usize, partial: Box<Partial> },
    #[error("pivot limit {0} exceeded")]
    PivotLimitExceeded(usize),
    #[error("division by zero at gate {0}")]
    DivisionByZero(usize),
    #[error("oracle violation: color {color} at vertex {vertex:?}")]
    OracleViolation { vertex: Vec<u64>, color: u64 },
    #[error("residual bound not met after {retries} refinements")]
    ResidualNotMet { retries: usize },
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
