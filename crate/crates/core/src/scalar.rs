use std::fmt::Debug;

use num_complex::Complex;
use num_rational::{Ratio, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field used by the closed forms: `f64` for numerics, `Rational64` for
/// exact bookkeeping.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync
{
    fn ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p).expect("representable numerator")
            / Self::from_i64(q).expect("representable denominator")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `cos(2π t)`, when representable in this field.
    ///
    /// The default only covers the rational values, i.e. `t` with reduced
    /// denominator 1, 2, 3, 4 or 6.
    fn cos_turns(t: Rational64) -> Option<Self> {
        exact_cos_turns(t)
    }
}

impl Scalar for f64 {
    fn cos_turns(t: Rational64) -> Option<Self> {
        let frac = t - t.floor();
        Some((2.0 * std::f64::consts::PI * frac.to_f64()?).cos())
    }
}

impl Scalar for Ratio<i64> {}

pub(crate) fn exact_cos_turns<T: Scalar>(t: Rational64) -> Option<T> {
    let frac = t - t.floor();
    let (p, q) = (*frac.numer(), *frac.denom());
    let (num, den) = match (q, p) {
        (1, _) => (1, 1),
        (2, _) => (-1, 1),
        (3, _) => (-1, 2),
        (4, _) => (0, 1),
        (6, _) => (1, 2),
        _ => return None,
    };
    Some(T::ratio(num, den))
}

/// `|z|^2` without going through a square root.
pub(crate) fn abs2<T: Scalar>(z: &Complex<T>) -> T {
    z.norm_sqr()
}
