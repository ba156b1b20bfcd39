use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::correlation::WeightedComb;
use crate::{Error, Result};

/// How [`periodogram_with`] evaluates the structure factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeriodogramMethod {
    /// Fold the comb modulo `G` and run one FFT of length `G`.
    #[default]
    Fft,
    /// Sum `Σ_n c_n e^{-2πikn}` for every grid point.
    Direct,
}

/// `I_N(k) = |Σ_n c_n e^{-2πikn}|² / L` on the grid `k = g/G`, possibly
/// averaged over several independent windows of the same length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Sites per window (`2N + 1` for symmetric windows).
    pub window_len: usize,
    pub trials: usize,
}

impl Periodogram {
    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    /// Pointwise mean of periodograms taken on the same grid and window length.
    pub fn average(items: &[Periodogram]) -> Result<Periodogram> {
        let first = items
            .first()
            .ok_or_else(|| Error::range("Periodogram::average", "nothing to average"))?;
        if items
            .iter()
            .any(|p| p.grid.len() != first.grid.len() || p.window_len != first.window_len)
        {
            return Err(Error::range(
                "Periodogram::average",
                "grid size or window length differs between trials",
            ));
        }
        let trials: usize = items.iter().map(|p| p.trials).sum();
        let mut values = vec![0.0; first.grid.len()];
        for p in items {
            for (acc, v) in values.iter_mut().zip(&p.values) {
                *acc += v * p.trials as f64;
            }
        }
        values.iter_mut().for_each(|v| *v /= trials as f64);
        Ok(Periodogram {
            grid: first.grid.clone(),
            values,
            window_len: first.window_len,
            trials,
        })
    }
}

pub fn periodogram(c: &WeightedComb, grid_size: usize) -> Result<Periodogram> {
    periodogram_with(c, grid_size, PeriodogramMethod::Fft)
}

pub fn periodogram_with(
    c: &WeightedComb,
    grid_size: usize,
    method: PeriodogramMethod,
) -> Result<Periodogram> {
    if grid_size < 2 {
        return Err(Error::range("periodogram", "grid needs at least 2 points"));
    }
    let g = grid_size as i64;
    let sums = match method {
        PeriodogramMethod::Fft => {
            // aliasing n -> n mod G is exact on the grid k = g/G
            let mut bins = vec![Complex64::new(0.0, 0.0); grid_size];
            for (i, w) in c.weights().iter().enumerate() {
                bins[(c.start() + i as i64).rem_euclid(g) as usize] += w;
            }
            FftPlanner::new()
                .plan_fft_forward(grid_size)
                .process(&mut bins);
            bins
        }
        PeriodogramMethod::Direct => {
            let twiddle: Vec<Complex64> = (0..grid_size)
                .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / grid_size as f64))
                .collect();
            (0..g)
                .map(|k| {
                    c.weights()
                        .iter()
                        .enumerate()
                        .map(|(i, w)| {
                            w * twiddle[(k * (c.start() + i as i64)).rem_euclid(g) as usize]
                        })
                        .sum()
                })
                .collect()
        }
    };
    let len = c.len() as f64;
    Ok(Periodogram {
        grid: (0..grid_size)
            .map(|j| j as f64 / grid_size as f64)
            .collect(),
        values: sums.iter().map(|s| s.norm_sqr() / len).collect(),
        window_len: c.len(),
        trials: 1,
    })
}

/// Point-mass estimate `I_N(k) / L = |Σ_n c_n e^{-2πikn}|² / L²` at a rational `k`.
pub fn bragg_estimate(c: &WeightedComb, k: Rational64) -> f64 {
    let (p, q) = (*k.numer() as i128, *k.denom() as i128);
    let sum: Complex64 = c
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let n = (c.start() + i as i64) as i128;
            let phase = (p * n).rem_euclid(q) as f64 / q as f64;
            w * Complex64::from_polar(1.0, -2.0 * PI * phase)
        })
        .sum();
    let len = c.len() as f64;
    sum.norm_sqr() / (len * len)
}

/// Reduced fractions `p/q` in `[0, 1)` with `q <= q_max`, ascending.
pub fn bragg_candidates(q_max: u32) -> Vec<Rational64> {
    let mut ks: Vec<Rational64> = (1..=q_max as i64)
        .flat_map(|q| (0..q).map(move |p| Rational64::new(p, q)))
        .collect();
    ks.sort();
    ks.dedup();
    ks
}

/// Point-mass test at one rational wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraggPeak {
    #[serde(with = "rational_string")]
    pub k: Rational64,
    /// Mean of [`bragg_estimate`] over the windows.
    pub intensity: f64,
    /// Mean periodogram on the neighbouring grid points, divided by `L`.
    pub background: f64,
    pub declared: bool,
}

/// Factor by which a point mass must exceed the scaled background.
pub const BRAGG_THRESHOLD: f64 = 10.0;

/// Tests every `p/q` with `q <= q_max` for a point mass.
///
/// A peak grows like `L` in the periodogram while an absolutely continuous
/// background stays `O(1)`, so a peak is declared when `I_N(k)/L` exceeds
/// [`BRAGG_THRESHOLD`] times the mean of `I_N/L` on the two grid points at
/// either side of `k`. Estimates below `1/L` (periodogram value below 1)
/// are never declared, so that a vanishing background cannot turn rounding
/// noise into a peak.
pub fn detect_bragg(
    combs: &[WeightedComb],
    pgram: &Periodogram,
    q_max: u32,
) -> Result<Vec<BraggPeak>> {
    if combs.is_empty() {
        return Err(Error::range("detect_bragg", "no windows given"));
    }
    let g = pgram.grid_size() as i64;
    Ok(bragg_candidates(q_max)
        .into_iter()
        .map(|k| {
            let intensity =
                combs.iter().map(|c| bragg_estimate(c, k)).sum::<f64>() / combs.len() as f64;
            let centre = (k.to_f64_lossy() * g as f64).round() as i64;
            let neighbours = [-2, -1, 1, 2];
            let background = neighbours
                .iter()
                .map(|d| pgram.values[(centre + d).rem_euclid(g) as usize])
                .sum::<f64>()
                / neighbours.len() as f64
                / pgram.window_len as f64;
            BraggPeak {
                k,
                intensity,
                background,
                declared: intensity > BRAGG_THRESHOLD * background
                    && intensity > 1.0 / pgram.window_len as f64,
            }
        })
        .collect())
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for Rational64 {
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

pub(crate) mod rational_string {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(k: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&k.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
