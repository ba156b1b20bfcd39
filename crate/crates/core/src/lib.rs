//! Simulation and spectral analysis of the close-packed dimer process on the
//! integers (the "dimeric molecule shift", DMS), its factor systems and a
//! randomly signed Thue–Morse cover.
//!
//! The crate is organised bottom-up:
//!
//! * [`ensembles`] produces finite windows of realizations and applies the
//!   shift and factor maps.
//! * [`correlation`] estimates autocorrelation coefficients from weighted
//!   combs and provides their exact closed forms.
//! * [`spectra`] holds the exact mixed diffraction measures together with the
//!   finite-volume estimators (periodogram, Bragg intensities, Fejér densities).
//! * [`dynamics`] covers the dynamical-spectrum side: the eigenvalue `-1`
//!   eigenfunction and the spectral measure of the cyclic vectors `σ_m`.
//! * [`io`], [`svg`], [`config`] and [`verify`] are the plumbing shared with
//!   the command-line front end.

pub mod config;
pub mod correlation;
pub mod dynamics;
pub mod ensembles;
mod error;
pub mod io;
mod model;
mod scalar;
pub mod spectra;
pub mod svg;
pub mod verify;

pub use correlation::{
    apply_weights, closed_autocorr, empirical_autocorr, empirical_mean, lift_real,
    sigma_correlation_closed, sigma_correlation_empirical, AutocorrSeq, ClosedFormAutocorr,
    Normalization, WeightMap, WeightedComb,
};
pub use dynamics::{
    dynamical_point_spectrum, eigen_relation_check, psi_estimate, sigma_density_empirical,
    sigma_spectral_density, PointSpectrum,
};
pub use ensembles::{
    classify, collapse_to_toy, factor_phi, sample, sample_dms, sample_factor_y, shift,
    tm_cover_sample, tm_word, toy_sequences, RealSequence, Realization, SamplerSpec, SequenceClass,
    Spin, SpinSequence, TmLetter, RNG_ALGORITHM,
};
pub use error::{Error, Result};
pub use model::Model;
pub use scalar::Scalar;
pub use spectra::{
    bragg_estimate, closed_diffraction, detect_bragg, fejer_density, periodogram, periodogram_with,
    poisson_lattice_transform, BraggPeak, MixedMeasure, Periodogram, PeriodogramMethod, PointPart,
    SampledDensity, TrigDensity,
};

/// Tool version recorded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
