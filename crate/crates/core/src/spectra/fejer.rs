use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::measure::PointPart;
use crate::correlation::AutocorrSeq;
use crate::{Error, Result};

/// A density sampled on the grid `k = g/G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDensity {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledDensity {
    pub fn from_fn(grid_size: usize, f: impl Fn(f64) -> f64) -> Self {
        let grid: Vec<f64> = (0..grid_size)
            .map(|g| g as f64 / grid_size as f64)
            .collect();
        let values = grid.iter().map(|&k| f(k)).collect();
        Self { grid, values }
    }

    /// `max_k |self(k) - f(k)|` over the grid.
    pub fn max_abs_error(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(&k, v)| (v - f(k)).abs())
            .fold(0.0, f64::max)
    }

    /// Value at the grid point nearest to `k` (taken mod 1).
    pub fn at(&self, k: f64) -> f64 {
        let g = self.grid.len();
        let idx = ((k.rem_euclid(1.0) * g as f64).round() as usize) % g;
        self.values[idx]
    }
}

/// Fejér-smoothed density estimate from an empirical autocorrelation,
///
/// `d(k) = Re Σ_{|n|≤M} (1 - |n|/(M+1)) η̃(n) e^{-2πikn}`,
///
/// where `M = a.max_lag` and `η̃ = η̂ - ζ` has the autocorrelation `ζ` of the
/// given point part removed.
pub fn fejer_density(
    a: &AutocorrSeq,
    grid_size: usize,
    peaks: Option<&PointPart<f64>>,
) -> Result<SampledDensity> {
    if grid_size == 0 {
        return Err(Error::range("fejer_density", "empty grid"));
    }
    let m = a.max_lag;
    let reduced: Vec<Complex64> = (0..=m as i64)
        .map(|n| {
            let eta = a.get(n).expect("lag within range");
            match peaks {
                Some(p) => eta - p.autocorr(n),
                None => eta,
            }
        })
        .collect();
    Ok(SampledDensity::from_fn(grid_size, |k| {
        let mut d = reduced[0].re;
        for (n, eta) in reduced.iter().enumerate().skip(1) {
            let weight = 1.0 - n as f64 / (m + 1) as f64;
            let phase = Complex64::from_polar(1.0, -2.0 * PI * k * n as f64);
            // n and -n together: 2 Re(η̃(n) e^{-2πikn})
            d += 2.0 * weight * (eta * phase).re;
        }
        d
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::Normalization;

    fn seq(coeffs: &[f64]) -> AutocorrSeq {
        AutocorrSeq {
            max_lag: coeffs.len() - 1,
            coefficients: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            normalization: Normalization::TermCount,
            window_len: 1000,
        }
    }

    #[test]
    fn exact_dms_coefficients_give_tapered_cosine() {
        let mut c = vec![0.0; 65];
        c[0] = 1.0;
        c[1] = -0.5;
        let d = fejer_density(&seq(&c), 512, None).unwrap();
        // weight of lag 1 is 64/65
        let err = d.max_abs_error(|k| 1.0 - 64.0 / 65.0 * (2.0 * PI * k).cos());
        assert!(err < 1e-12);
    }

    #[test]
    fn subtracting_the_point_part() {
        // η(n) = 1/2 δ_{n,0} + 1/2 on even lags, as for the factor system
        let c: Vec<f64> = (0..=16)
            .map(|n| {
                if n == 0 {
                    1.0
                } else if n % 2 == 0 {
                    0.5
                } else {
                    0.0
                }
            })
            .collect();
        let peaks = PointPart::new(2, vec![0.25, 0.25]).unwrap();
        let d = fejer_density(&seq(&c), 128, Some(&peaks)).unwrap();
        assert!(d.max_abs_error(|_| 0.5) < 1e-12);
    }

    #[test]
    fn nonnegative_for_positive_definite_input() {
        // ρ^n is the autocorrelation of an AR(1) process, hence positive definite
        let c: Vec<f64> = (0..20).map(|n| 0.8f64.powi(n)).collect();
        let d = fejer_density(&seq(&c), 256, None).unwrap();
        assert!(d.values.iter().all(|v| *v >= -1e-12));
        assert!(fejer_density(&seq(&c), 0, None).is_err());
    }

    #[test]
    fn nearest_grid_lookup() {
        let d = SampledDensity::from_fn(4, |k| k);
        assert_eq!(d.at(0.26), 0.25);
        assert_eq!(d.at(1.5), 0.5);
        assert_eq!(d.at(0.99), 0.0);
    }
}
