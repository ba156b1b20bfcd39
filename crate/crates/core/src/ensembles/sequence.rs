use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single `±1` spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn from_sign(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Spin::Plus),
            -1 => Ok(Spin::Minus),
            other => Err(Error::Parse(format!("spin must be +1 or -1, got {other}"))),
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Spin::Plus => 1,
            Spin::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    /// `(-1)^n` as a spin.
    pub fn alternating(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }
}

impl Neg for Spin {
    type Output = Spin;

    fn neg(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }
}

impl Mul for Spin {
    type Output = Spin;

    fn mul(self, rhs: Spin) -> Spin {
        if self == rhs {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Plus => "+",
            Spin::Minus => "-",
        })
    }
}

/// Largest symmetric window `[-r, r]` inside `start..=end`, if the origin is
/// covered at all.
pub(crate) fn symmetric_radius(start: i64, end: i64) -> Option<usize> {
    (start <= 0 && end >= 0).then(|| (-start).min(end) as usize)
}

/// A finite window of a `±1` sequence; `values[i]` sits at position `start + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSequence {
    start: i64,
    values: Vec<Spin>,
}

impl SpinSequence {
    pub fn new(start: i64, values: Vec<Spin>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::range("SpinSequence::new", "empty window"));
        }
        Ok(Self { start, values })
    }

    /// Window `[-N, N]` with `N = (len - 1) / 2`.
    pub fn symmetric(values: Vec<Spin>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::range(
                "SpinSequence::symmetric",
                format!("length {} is not of the form 2N+1", values.len()),
            ));
        }
        let radius = (values.len() / 2) as i64;
        Self::new(-radius, values)
    }

    pub fn from_signs(start: i64, signs: &[i64]) -> Result<Self> {
        let values = signs
            .iter()
            .map(|&s| Spin::from_sign(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(start, values)
    }

    /// Builds the window `start..=end` from a position function.
    pub fn from_fn(start: i64, end: i64, f: impl Fn(i64) -> Spin) -> Result<Self> {
        Self::new(start, (start..=end).map(f).collect())
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last position (inclusive).
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Some(N)` when the window is exactly `[-N, N]`.
    pub fn radius(&self) -> Option<usize> {
        (self.start + self.end() == 0).then_some((-self.start) as usize)
    }

    /// Index of position 0 in [`Self::values`], if the origin is covered.
    pub fn origin_index(&self) -> Option<usize> {
        (self.start <= 0 && self.end() >= 0).then_some((-self.start) as usize)
    }

    pub fn values(&self) -> &[Spin] {
        &self.values
    }

    pub fn get(&self, pos: i64) -> Option<Spin> {
        let idx = pos - self.start;
        (idx >= 0)
            .then(|| self.values.get(idx as usize).copied())
            .flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Spin)> + '_ {
        (self.start..).zip(self.values.iter().copied())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|s| s.as_f64()).collect()
    }

    /// Restriction to `from..=to`, which must lie inside the window.
    pub fn crop(&self, from: i64, to: i64) -> Result<Self> {
        if from < self.start || to > self.end() || from > to {
            return Err(Error::range(
                "crop",
                format!(
                    "[{from}, {to}] is not inside the window [{}, {}]",
                    self.start,
                    self.end()
                ),
            ));
        }
        let lo = (from - self.start) as usize;
        let hi = (to - self.start) as usize;
        Self::new(from, self.values[lo..=hi].to_vec())
    }

    /// Restriction to the largest symmetric window around the origin.
    pub fn symmetric_crop(&self) -> Result<Self> {
        let r = symmetric_radius(self.start, self.end())
            .ok_or_else(|| Error::range("symmetric_crop", "window does not contain the origin"))?
            as i64;
        self.crop(-r, r)
    }

    /// Global spin flip `(-w)_n = -w_n`.
    pub fn negate(&self) -> Self {
        Self {
            start: self.start,
            values: self.values.iter().map(|&s| -s).collect(),
        }
    }

    /// The equal-neighbour set `M = {m : w_m = w_{m+1}}` restricted to the window.
    pub fn equal_neighbours(&self) -> Vec<i64> {
        self.values
            .windows(2)
            .zip(self.start..)
            .filter(|(pair, _)| pair[0] == pair[1])
            .map(|(_, m)| m)
            .collect()
    }
}

impl fmt::Display for SpinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, s) in self.iter() {
            if pos == 0 && pos != self.start {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A finite window of a real-valued sequence (the Thue–Morse cover).
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    start: i64,
    values: Vec<f64>,
}

impl RealSequence {
    pub fn new(start: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::range("RealSequence::new", "empty window"));
        }
        Ok(Self { start, values })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn radius(&self) -> Option<usize> {
        (self.start + self.end() == 0).then_some((-self.start) as usize)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Classification by the equal-neighbour set `M(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceClass {
    /// `M` empty: one of the two alternating sequences.
    Periodic,
    /// `M` non-empty and contained in `2Z`.
    Even,
    /// `M` non-empty and contained in `2Z + 1`.
    Odd,
    /// `M` meets both parities; not a dimer configuration.
    Mixed,
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceClass::Periodic => "periodic",
            SequenceClass::Even => "even",
            SequenceClass::Odd => "odd",
            SequenceClass::Mixed => "mixed",
        })
    }
}

pub fn classify(w: &SpinSequence) -> SequenceClass {
    let (mut even, mut odd) = (false, false);
    for m in w.equal_neighbours() {
        if m.rem_euclid(2) == 0 {
            even = true;
        } else {
            odd = true;
        }
    }
    match (even, odd) {
        (false, false) => SequenceClass::Periodic,
        (true, false) => SequenceClass::Even,
        (false, true) => SequenceClass::Odd,
        (true, true) => SequenceClass::Mixed,
    }
}

/// `t`-fold shift `(S^t w)_n = w_{n+t}`, cropped to a symmetric window.
///
/// A window of radius `N` comes back with radius `N - |t|`.
pub fn shift(w: &SpinSequence, t: i64) -> Result<SpinSequence> {
    let (start, end) = (w.start() - t, w.end() - t);
    let r = symmetric_radius(start, end).ok_or_else(|| {
        Error::range(
            "shift",
            format!(
                "shift by {t} moves the origin out of [{}, {}]",
                w.start(),
                w.end()
            ),
        )
    })? as i64;
    SpinSequence::from_fn(-r, r, |n| w.get(n + t).expect("inside shifted window"))
}
