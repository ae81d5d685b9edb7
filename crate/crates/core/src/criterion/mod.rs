//! Bilinear orthogonality criterion: pair correlations, the `τ` estimate,
//! the resulting bound, and a ledger replaying each inequality of the
//! bilinear decomposition argument on concrete data.

mod correlation;
mod ledger;
mod sequence;

pub use correlation::{
    bilinear_sum, tau_estimate, vinogradov_bound, weighted_sum, PairCorrelation, PairLength, TauEstimate,
};
pub use ledger::{
    criterion_ledger, ledger_on, verdict, BlockLedger, CriterionConfig, CriterionReport, LedgerLine, LineKind,
    Verdict, HOLDS_BELOW, LEDGER_SLACK, VIOLATED_ABOVE,
};
pub use sequence::{unit_phase, BoundedSequence, MODULUS_SLACK};
