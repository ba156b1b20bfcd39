//! Autocorrelation coefficients `η(n)` of weighted Dirac combs on `Z`:
//! finite-window estimators and the exact closed forms of every model.

use std::fmt;
use std::str::FromStr;

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{RealSequence, Spin, SpinSequence};
use crate::scalar::abs2;
use crate::{Error, Model, Result, Scalar};

/// The map `h : {±1} -> C`, stored as its two values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightMap<T = f64> {
    pub h_plus: Complex<T>,
    pub h_minus: Complex<T>,
}

impl<T: Scalar> WeightMap<T> {
    pub fn new(h_plus: Complex<T>, h_minus: Complex<T>) -> Self {
        Self { h_plus, h_minus }
    }

    pub fn real(h_plus: T, h_minus: T) -> Self {
        Self::new(
            Complex::new(h_plus, T::zero()),
            Complex::new(h_minus, T::zero()),
        )
    }

    /// `h± = ±1`.
    pub fn balanced() -> Self {
        Self::real(T::one(), -T::one())
    }

    pub fn is_balanced(&self) -> bool {
        self.h_plus.clone() + self.h_minus.clone() == Complex::new(T::zero(), T::zero())
    }

    pub fn weight(&self, s: Spin) -> Complex<T> {
        match s {
            Spin::Plus => self.h_plus.clone(),
            Spin::Minus => self.h_minus.clone(),
        }
    }

    /// `|h+ + h-|^2`
    pub fn sum_abs2(&self) -> T {
        abs2(&(self.h_plus.clone() + self.h_minus.clone()))
    }

    /// `|h+ - h-|^2`
    pub fn diff_abs2(&self) -> T {
        abs2(&(self.h_plus.clone() - self.h_minus.clone()))
    }

    /// Multiplies both weights by `z`.
    pub fn scaled(&self, z: &Complex<T>) -> Self {
        Self::new(
            self.h_plus.clone() * z.clone(),
            self.h_minus.clone() * z.clone(),
        )
    }

    pub fn to_f64(&self) -> WeightMap<f64> {
        let c = |z: &Complex<T>| Complex64::new(z.re.to_f64_lossy(), z.im.to_f64_lossy());
        WeightMap::new(c(&self.h_plus), c(&self.h_minus))
    }
}

impl<T: Scalar> Default for WeightMap<T> {
    fn default() -> Self {
        Self::balanced()
    }
}

impl fmt::Display for WeightMap<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}",
            format_complex(&self.h_plus),
            format_complex(&self.h_minus)
        )
    }
}

fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`; the components use `T`'s own syntax,
/// so `Rational64` accepts `p/q` parts.
pub fn parse_complex<T: Scalar + FromStr>(s: &str) -> Result<Complex<T>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("cannot parse complex number `{s}`"));
    let comp = |t: &str| t.parse::<T>().map_err(|_| err());
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(comp(&s)?, T::zero()));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (comp(&body[..i])?, &body[i..]),
        None => (T::zero(), body),
    };
    let im = match im {
        "" | "+" => T::one(),
        "-" => -T::one(),
        other => comp(other.strip_prefix('+').unwrap_or(other))?,
    };
    Ok(Complex::new(re, im))
}

impl<T: Scalar + FromStr> FromStr for WeightMap<T> {
    type Err = Error;

    /// `h_plus,h_minus`, e.g. `1,-1` or `0.5+0.5i,1/4`.
    fn from_str(s: &str) -> Result<Self> {
        let (p, m) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("weight map `{s}` must be `h_plus,h_minus`")))?;
        Ok(Self::new(parse_complex(p)?, parse_complex(m)?))
    }
}

/// Complex weights on a window of `Z`; `weights[i]` sits at `start + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComb {
    start: i64,
    weights: Vec<Complex64>,
}

impl WeightedComb {
    pub fn new(start: i64, weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::range("WeightedComb::new", "empty window"));
        }
        Ok(Self { start, weights })
    }

    pub fn from_real(start: i64, weights: &[f64]) -> Result<Self> {
        Self::new(
            start,
            weights.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.weights.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn radius(&self) -> Option<usize> {
        (self.start + self.end() == 0).then_some((-self.start) as usize)
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }
}

pub fn apply_weights(w: &SpinSequence, h: &WeightMap) -> WeightedComb {
    WeightedComb {
        start: w.start(),
        weights: w.values().iter().map(|&s| h.weight(s)).collect(),
    }
}

pub fn lift_real(v: &RealSequence) -> WeightedComb {
    WeightedComb::from_real(v.start(), v.values()).expect("non-empty sequence")
}

/// Denominator used for lag `n` on a window of `L` sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by the number of available pairs, `L - n`.
    TermCount,
}

impl Normalization {
    pub fn denominator(self, window_len: usize, lag: usize) -> usize {
        match self {
            Normalization::TermCount => window_len - lag,
        }
    }
}

/// Autocorrelation coefficients for lags `0..=max_lag`; negative lags follow
/// from `η(-n) = conj(η(n))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrSeq {
    pub max_lag: usize,
    pub coefficients: Vec<Complex64>,
    pub normalization: Normalization,
    /// Number of sites the estimate was taken from.
    pub window_len: usize,
}

impl AutocorrSeq {
    /// `η(n)` for `|n| <= max_lag`.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let c = *self.coefficients.get(n.unsigned_abs() as usize)?;
        Some(if n < 0 { c.conj() } else { c })
    }

    /// Number of products averaged for lag `n`.
    pub fn terms(&self, n: usize) -> usize {
        self.normalization.denominator(self.window_len, n)
    }
}

fn lagged_means(values: &[Complex64], n_max: usize) -> Vec<Complex64> {
    let len = values.len();
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let sum: Complex64 = values[..len - n]
                .iter()
                .zip(&values[n..])
                .map(|(a, b)| a.conj() * b)
                .sum();
            sum / (len - n) as f64
        })
        .collect()
}

/// `η̂(n) = (1 / (L - n)) Σ_m conj(c_m) c_{m+n}` over all pairs inside the window.
pub fn empirical_autocorr(c: &WeightedComb, n_max: usize) -> Result<AutocorrSeq> {
    if n_max >= c.len() {
        return Err(Error::range(
            "empirical_autocorr",
            format!("max lag {n_max} needs a window longer than {}", c.len()),
        ));
    }
    Ok(AutocorrSeq {
        max_lag: n_max,
        coefficients: lagged_means(&c.weights, n_max),
        normalization: Normalization::TermCount,
        window_len: c.len(),
    })
}

pub fn empirical_mean(c: &WeightedComb) -> Complex64 {
    c.weights.iter().sum::<Complex64>() / c.len() as f64
}

/// Default statistical tolerance `5 / sqrt(terms)` for a mean of `terms`
/// unit-variance products.
pub fn statistical_tolerance(terms: usize) -> f64 {
    5.0 / (terms as f64).sqrt()
}

/// Orbit average `Ĉ(n)` of `σ_m σ_{m+n}` with `σ_m = w_m + w_{m+1}`.
pub fn sigma_correlation_empirical(w: &SpinSequence, n_max: usize) -> Result<AutocorrSeq> {
    if w.len() < 2 * n_max + 3 {
        return Err(Error::range(
            "sigma_correlation_empirical",
            format!(
                "window of {} sites is too short for max lag {n_max}",
                w.len()
            ),
        ));
    }
    let sigma: Vec<Complex64> = w
        .values()
        .windows(2)
        .map(|p| Complex64::new(f64::from(p[0].value() + p[1].value()), 0.0))
        .collect();
    Ok(AutocorrSeq {
        max_lag: n_max,
        coefficients: lagged_means(&sigma, n_max),
        normalization: Normalization::TermCount,
        window_len: sigma.len(),
    })
}

/// Which correlation function a [`ClosedFormAutocorr`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedKind {
    Autocorrelation(Model),
    /// `n -> <σ_m | U^n σ_m>` for the DMS.
    SigmaObservable,
}

/// Exact real, even correlation function
/// `η(n) = pattern[n mod q] + finite[|n|]` with `q = pattern.len()` and
/// `finite` zero beyond its length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormAutocorr<T = Rational64> {
    pub kind: ClosedKind,
    pub pattern: Vec<T>,
    pub finite: Vec<T>,
}

impl<T: Scalar> ClosedFormAutocorr<T> {
    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn value(&self, n: i64) -> T {
        let q = self.pattern.len() as i64;
        let periodic = self.pattern[n.rem_euclid(q) as usize].clone();
        match self.finite.get(n.unsigned_abs() as usize) {
            Some(f) => periodic + f.clone(),
            None => periodic,
        }
    }

    pub fn values(&self, n_max: usize) -> Vec<T> {
        (0..=n_max as i64).map(|n| self.value(n)).collect()
    }

    /// `2η(n) + η(n+1) + η(n-1)`, the correlation of `σ_m = w_m + w_{m+1}`
    /// implied by `η`.
    pub fn sigma_from_eta(&self, n: i64) -> T {
        let two = T::one() + T::one();
        two * self.value(n) + self.value(n + 1) + self.value(n - 1)
    }
}

/// Exact autocorrelation of `model` with weights `h`.
///
/// With `s = h+ + h-`, `d = h+ - h-`:
/// * toy: `|s|²/4 + (|d|²/4)(-1)^n`;
/// * DMS: `|s|²/4 + (|d|²/4)(δ_{n,0} - ½δ_{|n|,1})`;
/// * factor `Y`: `(|s|² + |h+|² - |h-|²)/4 + (|d|²/4)(½δ_{n,0} + ½·1_{2Z}(n))`;
/// * TM cover: `δ_{n,0}`; its weights are built in and `h` is not used.
pub fn closed_autocorr<T: Scalar>(model: Model, h: &WeightMap<T>) -> ClosedFormAutocorr<T> {
    let four = T::from_i64(4).unwrap();
    let half = T::ratio(1, 2);
    let mean_part = h.sum_abs2() / four.clone();
    let fluct = h.diff_abs2() / four;
    let (pattern, finite) = match model {
        Model::Toy => (
            vec![mean_part.clone() + fluct.clone(), mean_part - fluct],
            vec![],
        ),
        Model::Dms => (vec![mean_part], vec![fluct.clone(), -(fluct * half)]),
        Model::FactorY => {
            let four = T::from_i64(4).unwrap();
            let cross = (abs2(&h.h_plus) - abs2(&h.h_minus)) / four;
            let half_fluct = fluct * half;
            (
                vec![
                    mean_part.clone() + cross.clone() + half_fluct.clone(),
                    mean_part + cross,
                ],
                vec![half_fluct],
            )
        }
        Model::TmCover => (vec![T::zero()], vec![T::one()]),
    };
    ClosedFormAutocorr {
        kind: ClosedKind::Autocorrelation(model),
        pattern,
        finite,
    }
}

/// `C(n) = δ_{n,0} - ½(δ_{n,2} + δ_{n,-2})` for the DMS observables `σ_m`.
pub fn sigma_correlation_closed() -> ClosedFormAutocorr<Rational64> {
    ClosedFormAutocorr {
        kind: ClosedKind::SigmaObservable,
        pattern: vec![Rational64::from_integer(0)],
        finite: vec![
            Rational64::from_integer(1),
            Rational64::from_integer(0),
            Rational64::new(-1, 2),
        ],
    }
}
