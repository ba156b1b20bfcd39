//! Dynamical-spectrum side of the DMS: the eigenfunction for eigenvalue `-1`,
//! the spectral measure of the cyclic vectors `σ_m = w_m + w_{m+1}`, and the
//! point spectrum labels.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::correlation::sigma_correlation_empirical;
use crate::ensembles::{shift, SequenceClass, SpinSequence};
use crate::spectra::{fejer_density, SampledDensity, TrigDensity};
use crate::{Error, Model, Result};

/// Finite-window estimate of the eigenfunction `ψ`:
/// `(2 / P) Σ_n (-1)^n w_n w_{n+1}` over the `P = len - 1` adjacent pairs.
///
/// Tends to `+1` on even and `-1` on odd sequences and to 0 on the periodic
/// ones. Not clamped; tiny windows can leave `[-1, 1]`.
pub fn psi_estimate(w: &SpinSequence) -> Result<f64> {
    if w.len() < 2 {
        return Err(Error::range(
            "psi_estimate",
            "need at least one adjacent pair",
        ));
    }
    let sum: i64 = w
        .values()
        .windows(2)
        .zip(w.start()..)
        .map(|(p, n)| {
            let prod = i64::from(p[0].value() * p[1].value());
            if n.rem_euclid(2) == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum();
    Ok(2.0 * sum as f64 / (w.len() - 1) as f64)
}

/// `|ψ̂(Sw) + ψ̂(w)|`; small when the eigenvalue relation `ψ∘S = -ψ` holds.
pub fn eigen_relation_check(w: &SpinSequence) -> Result<f64> {
    if w.radius().is_some_and(|r| r < 2) || w.len() < 5 {
        return Err(Error::range(
            "eigen_relation_check",
            "window radius must be at least 2",
        ));
    }
    Ok((psi_estimate(&shift(w, 1)?)? + psi_estimate(w)?).abs())
}

/// Density of the spectral measure of `σ_m`: `1 - cos(4πk)`, the same for all `m`.
pub fn sigma_spectral_density() -> TrigDensity<Rational64> {
    TrigDensity::new(vec![
        Rational64::from_integer(1),
        Rational64::from_integer(0),
        Rational64::from_integer(-1),
    ])
}

/// Fejér-smoothed estimate of the `σ_m` spectral density from one window.
pub fn sigma_density_empirical(
    w: &SpinSequence,
    n_max: usize,
    grid_size: usize,
) -> Result<SampledDensity> {
    let c = sigma_correlation_empirical(w, n_max)?;
    fejer_density(&c, grid_size, None)
}

/// Pure point dynamical spectrum `Σ_{q ∈ generators} (1/q) Z` of the
/// suspended (`R`-) action; `Z` itself is always included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpectrum {
    pub generators: BTreeSet<u32>,
}

impl PointSpectrum {
    /// Common denominator `lcm(generators)`: the spectrum is `(1/q) Z`.
    pub fn denominator(&self) -> u32 {
        self.generators.iter().fold(1, |acc, &q| lcm(acc, q))
    }

    pub fn contains(&self, k: Rational64) -> bool {
        i64::from(self.denominator()) % k.denom() == 0
    }

    /// The spectrum modulo `Z`, as representatives in `[0, 1)`.
    pub fn cosets(&self) -> BTreeSet<Rational64> {
        let q = i64::from(self.denominator());
        (0..q).map(|r| Rational64::new(r, q)).collect()
    }

    /// Textual label of the continuous remainder.
    pub fn continuous_part(&self) -> &'static str {
        "countable Lebesgue"
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `Z/2` for the toy system, the DMS and its factor `Y`.
pub fn dynamical_point_spectrum(model: Model) -> Result<PointSpectrum> {
    match model {
        Model::Toy | Model::Dms | Model::FactorY => Ok(PointSpectrum {
            generators: [2].into_iter().collect(),
        }),
        Model::TmCover => Err(Error::UnsupportedModel(model, "dynamical_point_spectrum")),
    }
}

/// Per-window summary written by the `dynamics` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsReport {
    pub class: SequenceClass,
    pub psi_hat: f64,
    pub eigen_residual: f64,
    pub sigma_density_error: f64,
}

/// Computes every field of [`DynamicsReport`] for one window.
pub fn dynamics_report(w: &SpinSequence, n_max: usize, grid_size: usize) -> Result<DynamicsReport> {
    let exact = sigma_spectral_density();
    let density = sigma_density_empirical(w, n_max, grid_size)?;
    Ok(DynamicsReport {
        class: crate::ensembles::classify(w),
        psi_hat: psi_estimate(w)?,
        eigen_residual: eigen_relation_check(w)?,
        sigma_density_error: density.max_abs_error(|k| exact.eval(k)),
    })
}
