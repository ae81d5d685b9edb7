//! Discrete horocycle flow on the modular surface.

mod averages;
mod observable;
mod orbit;
mod point;
mod quadrature;
mod reduce;

pub use averages::{
    birkhoff_average, mobius_disjointness_sum, pair_correlation, split_observable, CorrelationEstimate,
    DisjointnessReport, DisjointnessRow, ObservableSeries,
};
pub use observable::{bump, smooth_step, Observable};
pub use orbit::{FundamentalDomainCoords, Orbit, Precision, DEFAULT_GUARD_BITS, DOUBLE_LIMIT, MIN_GUARD_BITS};
pub use point::{genericity, Genericity, ModularPoint, DET_TOLERANCE};
pub use quadrature::{domain_mass, gauss_legendre, haar_integral, haar_mean, QuadratureResult, QuadratureSpec, DOMAIN_AREA};
pub use reduce::{det, reduce, IntMatrix, ReducedPoint, IDENTITY, MAX_STEPS};
