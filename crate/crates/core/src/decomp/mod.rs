//! Decomposition of `[1, N)` into the sets `S`, `S_j` and the products `P_j Q_j`.

mod build;
mod classify;
mod coverage;
mod params;

pub use build::{
    build_decomposition, build_decomposition_with, BlockPart, Decomposition, DecompositionCounts,
    Violations,
};
pub use classify::{classify, q_membership, Classifier, Membership};
pub use coverage::{coverage_report, CoverageLine, CoverageReport};
pub use params::{default_schedule, DecompositionParams};
