//! Diffraction of combs supported on `Z`, reported on the fundamental domain
//! `[0, 1)` (integer-supported combs have 1-periodic diffraction).
//!
//! [`measure`] holds the exact mixed measures; [`periodogram`] and [`fejer`]
//! the finite-volume estimators that are checked against them.

pub mod fejer;
pub mod measure;
pub mod periodogram;

pub use fejer::{fejer_density, SampledDensity};
pub use measure::{
    closed_diffraction, poisson_lattice_transform, MixedMeasure, PointPart, TrigDensity,
};
pub use periodogram::{
    bragg_candidates, bragg_estimate, detect_bragg, periodogram, periodogram_with, BraggPeak,
    Periodogram, PeriodogramMethod,
};
