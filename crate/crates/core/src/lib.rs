//! Number-theoretic and dynamical tools for testing orthogonality of the
//! Möbius function against horocycle-flow sequences.

pub mod arith;
pub mod correlator;
pub mod criterion;
pub mod decomp;
pub mod dynamics;
pub mod error;
pub mod scalar;
pub mod summation;
pub mod symbolic;

pub use error::{Error, ErrorClass, Result};
pub use scalar::{Real, Scalar};

/// Double-precision instantiations of the generic types.
pub type MultiplicativeTableF64 = arith::MultiplicativeTable<f64>;
pub type BoundedSequenceF64 = criterion::BoundedSequence<f64>;
pub type CriterionReportF64 = criterion::CriterionReport<f64>;
pub type BlockLedgerF64 = criterion::BlockLedger<f64>;
pub type TauEstimateF64 = criterion::TauEstimate<f64>;
pub type PairCorrelationF64 = criterion::PairCorrelation<f64>;
pub type ReducedPointF64 = dynamics::ReducedPoint<f64>;
