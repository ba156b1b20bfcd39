use super::sequence::{classify, symmetric_radius, SequenceClass, Spin, SpinSequence};
use crate::{Error, Result};

/// The two-to-one factor map `φ(w)_n = -w_n w_{n+1}`.
///
/// The natural image of `start..=end` is `start..=end-1`; it is returned
/// cropped to a symmetric window, so radius `N` maps to radius `N - 1`.
pub fn factor_phi(w: &SpinSequence) -> Result<SpinSequence> {
    if w.len() < 2 {
        return Err(Error::range(
            "factor_phi",
            "window needs at least two sites",
        ));
    }
    let r = symmetric_radius(w.start(), w.end() - 1)
        .ok_or_else(|| Error::range("factor_phi", "image window does not contain the origin"))?
        as i64;
    SpinSequence::from_fn(-r, r, |n| {
        let (a, b) = (w.get(n).unwrap(), w.get(n + 1).unwrap());
        -(a * b)
    })
}

/// Degenerate factor onto the toy system: `u+` for even sequences, `u- = S u+`
/// for odd ones, and periodic windows are returned unchanged.
pub fn collapse_to_toy(w: &SpinSequence) -> Result<SpinSequence> {
    let sign = match classify(w) {
        SequenceClass::Periodic => return Ok(w.clone()),
        SequenceClass::Even => Spin::Plus,
        SequenceClass::Odd => Spin::Minus,
        SequenceClass::Mixed => return Err(Error::MixedSequence),
    };
    SpinSequence::from_fn(w.start(), w.end(), |n| sign * Spin::alternating(n))
}
