//! Correlator groups of cusp points and the parabolic character.

mod classify;
mod field;
mod parabolic;

pub use crate::symbolic::PointDescriptor;
pub use classify::{
    classify_correlator, is_rational_element, surd_element_for, surd_group_element, CorrelatorClass,
    CorrelatorGroup, SurdElement, Witness, CHI_TOLERANCE,
};
pub use field::Quadratic;
pub use parabolic::{chi, conjugation_exponent_check, ConjugationCheck, ParabolicElement, PARABOLIC_TOLERANCE};
