//! Realizations of the toy system, the DMS, its factor `Y` and the
//! Thue–Morse cover, on finite windows of `Z`.
//!
//! A window is a contiguous block of positions `start..=end`. Samplers always
//! produce symmetric windows `[-N, N]`; the maps accept any window that
//! contains the origin and return the largest symmetric window they can fill.

mod maps;
mod sampler;
mod sequence;
mod thue_morse;

pub use maps::{collapse_to_toy, factor_phi};
pub use sampler::{
    sample, sample_dms, sample_factor_y, tm_cover_sample, toy_sequences, Realization, SamplerSpec,
    RNG_ALGORITHM,
};
pub use sequence::{classify, shift, RealSequence, SequenceClass, Spin, SpinSequence};
pub use thue_morse::{tm_word, TmLetter};
