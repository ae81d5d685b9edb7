use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Every variant maps onto one [`ErrorClass`], which front ends use to pick
/// machine-readable exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs about {needed_bytes} bytes, budget is {budget_bytes}")]
    Capacity {
        what: String,
        needed_bytes: u64,
        budget_bytes: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("horizon error: index {needed} requested but sequence `{label}` stops at {available}")]
    Horizon {
        label: String,
        needed: u64,
        available: u64,
    },

    #[error("precision error: {0}")]
    Precision(String),

    #[error("no admissible prime pairs below cutoff {cutoff}")]
    EmptyPairSet { cutoff: f64 },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// Coarse classification of [`Error`] used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    Validation,
    Capacity,
    Precision,
    Computation,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Capacity { .. } => ErrorClass::Capacity,
            Error::Precision(_) => ErrorClass::Precision,
            Error::Domain(_)
            | Error::Range(_)
            | Error::InvalidDescriptor(_)
            | Error::UnsupportedDescriptor(_)
            | Error::Shape(_)
            | Error::EmptyPairSet { .. } => ErrorClass::Validation,
            Error::Horizon { .. } | Error::Convergence(_) | Error::Overflow(_) => {
                ErrorClass::Computation
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
