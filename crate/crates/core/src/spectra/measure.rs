use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::correlation::{ClosedFormAutocorr, WeightMap};
use crate::scalar::abs2;
use crate::{Error, Model, Result, Scalar};

/// Cosine polynomial `a_0 + Σ_{j≥1} a_j cos(2π j k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigDensity<T = Rational64> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> TrigDensity<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![T::zero()]
        } else {
            coeffs
        };
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    /// Density whose Fourier coefficients are the even sequence `f(n)`,
    /// given for `n = 0..len`: `a_0 = f(0)`, `a_j = 2 f(j)`.
    pub fn from_even_coefficients(f: &[T]) -> Self {
        let two = T::one() + T::one();
        Self::new(
            f.iter()
                .enumerate()
                .map(|(j, v)| {
                    if j == 0 {
                        v.clone()
                    } else {
                        two.clone() * v.clone()
                    }
                })
                .collect(),
        )
    }

    /// The `n`-th Fourier coefficient `∫_0^1 e^{2πink} density(k) dk`.
    pub fn fourier_coefficient(&self, n: i64) -> T {
        let j = n.unsigned_abs() as usize;
        match self.coeffs.get(j) {
            None => T::zero(),
            Some(a) if j == 0 => a.clone(),
            Some(a) => a.clone() / (T::one() + T::one()),
        }
    }

    /// Integral over one period.
    pub fn mean(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn eval(&self, k: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a.to_f64_lossy() * (2.0 * std::f64::consts::PI * j as f64 * k).cos())
            .sum()
    }

    /// Exact value at a rational `k`, when every cosine involved is rational.
    pub fn eval_exact(&self, k: Rational64) -> Option<T> {
        self.coeffs
            .iter()
            .enumerate()
            .try_fold(T::zero(), |acc, (j, a)| {
                let c = T::cos_turns(k * Rational64::from_integer(j as i64))?;
                Some(acc + a.clone() * c)
            })
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * s.clone()).collect())
    }

    /// Minimum over the grid `g / grid_size`.
    pub fn min_on_grid(&self, grid_size: usize) -> f64 {
        (0..grid_size)
            .map(|g| self.eval(g as f64 / grid_size as f64))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_f64(&self) -> TrigDensity<f64> {
        TrigDensity::new(self.coeffs.iter().map(|a| a.to_f64_lossy()).collect())
    }
}

/// 1-periodic pure point measure on `(1/q) Z`: `intensities[r]` sits on each
/// point of the coset `r/q + Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPart<T = Rational64> {
    pub q: usize,
    pub intensities: Vec<T>,
}

impl<T: Scalar> PointPart<T> {
    pub fn new(q: usize, intensities: Vec<T>) -> Result<Self> {
        if q == 0 {
            return Err(Error::range(
                "PointPart::new",
                "denominator must be positive",
            ));
        }
        if intensities.len() != q {
            return Err(Error::range(
                "PointPart::new",
                format!("{} intensities for q = {q}", intensities.len()),
            ));
        }
        if intensities.iter().any(|i| *i < T::zero()) {
            return Err(Error::range("PointPart::new", "negative intensity"));
        }
        Ok(Self { q, intensities })
    }

    pub fn zero() -> Self {
        Self {
            q: 1,
            intensities: vec![T::zero()],
        }
    }

    /// Mass per unit period.
    pub fn total(&self) -> T {
        self.intensities
            .iter()
            .fold(T::zero(), |a, b| a + b.clone())
    }

    pub fn intensity_at(&self, k: Rational64) -> T {
        let frac = k - k.floor();
        let q = self.q as i64;
        if q % frac.denom() != 0 {
            return T::zero();
        }
        let r = frac.numer() * (q / frac.denom());
        self.intensities[r as usize].clone()
    }

    /// Cosets (as representatives in `[0, 1)`) that carry a nonzero intensity.
    pub fn support(&self) -> BTreeSet<Rational64> {
        self.intensities
            .iter()
            .enumerate()
            .filter(|(_, i)| !i.is_zero())
            .map(|(r, _)| Rational64::new(r as i64, self.q as i64))
            .collect()
    }

    /// Equality as measures, independent of the chosen `q`.
    pub fn same_measure(&self, other: &Self) -> bool {
        let l = lcm(self.q, other.q) as i64;
        (0..l).all(|r| {
            let k = Rational64::new(r, l);
            self.intensity_at(k) == other.intensity_at(k)
        })
    }

    /// Autocorrelation coefficients generated by this point part,
    /// `ζ(n) = Σ_r I_r e^{2πi r n / q}`.
    pub fn autocorr(&self, n: i64) -> Complex64 {
        self.intensities
            .iter()
            .enumerate()
            .map(|(r, i)| {
                let phase = (r as i64 * n).rem_euclid(self.q as i64) as f64 / self.q as f64;
                Complex64::from_polar(i.to_f64_lossy(), 2.0 * std::f64::consts::PI * phase)
            })
            .sum()
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self {
            q: self.q,
            intensities: self
                .intensities
                .iter()
                .map(|i| i.clone() * s.clone())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> PointPart<f64> {
        PointPart {
            q: self.q,
            intensities: self.intensities.iter().map(|i| i.to_f64_lossy()).collect(),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Pure point part plus absolutely continuous density; no model here has a
/// singular continuous component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedMeasure<T = Rational64> {
    pub point: PointPart<T>,
    pub ac: TrigDensity<T>,
}

impl<T: Scalar> MixedMeasure<T> {
    /// `(point intensity at k, density at k)`.
    pub fn eval(&self, k: Rational64) -> (T, f64) {
        let dens = match self.ac.eval_exact(k) {
            Some(v) => v.to_f64_lossy(),
            None => self.ac.eval(k.to_f64_lossy()),
        };
        (self.point.intensity_at(k), dens)
    }

    /// Mass per unit period: point intensities plus `a_0`.
    pub fn period_mass(&self) -> T {
        self.point.total() + self.ac.mean()
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self {
            point: self.point.scaled(s),
            ac: self.ac.scaled(s),
        }
    }

    pub fn to_f64(&self) -> MixedMeasure<f64> {
        MixedMeasure {
            point: self.point.to_f64(),
            ac: self.ac.to_f64(),
        }
    }
}

/// Exact diffraction of `model` with weights `h` (`s = h+ + h-`, `d = h+ - h-`):
///
/// * toy: `|s|²/4` on `Z`, `|d|²/4` on `Z + ½`, no density;
/// * DMS: `|s|²/4` on `Z`, density `(|d|²/4)(1 - cos 2πk)`;
/// * factor `Y`: `(|s|² + |h+|² - |h-|²)/4 + |d|²/16` on `Z`, `|d|²/16` on
///   `Z + ½`, density `|d|²/8`;
/// * TM cover: Lebesgue measure (density 1), independent of `h`.
pub fn closed_diffraction<T: Scalar>(model: Model, h: &WeightMap<T>) -> MixedMeasure<T> {
    let four = T::from_i64(4).unwrap();
    let lattice = h.sum_abs2() / four.clone();
    let d2 = h.diff_abs2();
    match model {
        Model::Toy => MixedMeasure {
            point: PointPart {
                q: 2,
                intensities: vec![lattice, d2 / four],
            },
            ac: TrigDensity::zero(),
        },
        Model::Dms => {
            let a = d2 / four;
            MixedMeasure {
                point: PointPart {
                    q: 1,
                    intensities: vec![lattice],
                },
                ac: TrigDensity::new(vec![a.clone(), -a]),
            }
        }
        Model::FactorY => {
            let sixteen = T::from_i64(16).unwrap();
            let eight = T::from_i64(8).unwrap();
            let cross = (abs2(&h.h_plus) - abs2(&h.h_minus)) / four;
            let half_coset = d2.clone() / sixteen;
            MixedMeasure {
                point: PointPart {
                    q: 2,
                    intensities: vec![lattice + cross + half_coset.clone(), half_coset],
                },
                ac: TrigDensity::new(vec![d2 / eight]),
            }
        }
        Model::TmCover => MixedMeasure {
            point: PointPart::zero(),
            ac: TrigDensity::new(vec![T::one()]),
        },
    }
}

/// Fourier transform of a `q`-periodic autocorrelation `Σ_n p(n mod q) δ_n`:
/// the pure point measure on `(1/q) Z` with `I_r = (1/q) Σ_j p_j e^{-2πi rj/q}`.
///
/// The pattern must be even (`p_j = p_{q-j}`), as every real autocorrelation
/// is, and must be positive definite (all `I_r ≥ 0`). In exact arithmetic the
/// period is limited to 1, 2, 3, 4 or 6.
pub fn poisson_lattice_transform<T: Scalar>(pattern: &[T]) -> Result<PointPart<T>> {
    let q = pattern.len();
    if q == 0 {
        return Err(Error::range(
            "poisson_lattice_transform",
            "period must be positive",
        ));
    }
    if (1..q).any(|j| pattern[j] != pattern[q - j]) {
        return Err(Error::range(
            "poisson_lattice_transform",
            "pattern is not even",
        ));
    }
    let qt = T::from_usize(q).unwrap();
    let intensities = (0..q)
        .map(|r| {
            pattern
                .iter()
                .enumerate()
                .try_fold(T::zero(), |acc, (j, p)| {
                    let c = T::cos_turns(Rational64::new((r * j) as i64, q as i64))?;
                    Some(acc + p.clone() * c)
                })
        })
        .map(|s| {
            s.map(|s| s / qt.clone()).ok_or_else(|| {
                Error::range(
                    "poisson_lattice_transform",
                    format!("period {q} has irrational roots of unity in this field"),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PointPart::new(q, intensities)
}

impl<T: Scalar> ClosedFormAutocorr<T> {
    /// Diffraction built from the autocorrelation itself: the periodic part
    /// through [`poisson_lattice_transform`], the finitely supported part as
    /// a cosine polynomial.
    pub fn transform(&self) -> Result<MixedMeasure<T>> {
        Ok(MixedMeasure {
            point: poisson_lattice_transform(&self.pattern)?,
            ac: TrigDensity::from_even_coefficients(&self.finite),
        })
    }
}
