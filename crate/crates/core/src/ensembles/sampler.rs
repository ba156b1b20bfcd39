use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maps::factor_phi;
use super::sequence::{RealSequence, Spin, SpinSequence};
use super::thue_morse::tm_word;
use crate::{Error, Model, Result};

/// Identifier of the generator behind every sampler, recorded in artifacts.
///
/// `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha` 0.3; booleans are
/// drawn with `Rng::gen::<bool>()`.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What to sample: model, window radius `N` (window `[-N, N]`) and seed.
///
/// The same spec always yields bit-identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub model: Model,
    pub radius: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(model: Model, radius: usize, seed: u64) -> Self {
        Self {
            model,
            radius,
            seed,
        }
    }

    pub fn dms(radius: usize, seed: u64) -> Self {
        Self::new(Model::Dms, radius, seed)
    }

    pub fn factor_y(radius: usize, seed: u64) -> Self {
        Self::new(Model::FactorY, radius, seed)
    }

    pub fn tm_cover(radius: usize, seed: u64) -> Self {
        Self::new(Model::TmCover, radius, seed)
    }

    fn expect_model(&self, model: Model, op: &'static str) -> Result<()> {
        if self.model != model {
            return Err(Error::InvalidSpec(format!(
                "{op} needs model {model}, got {}",
                self.model
            )));
        }
        Ok(())
    }
}

/// The two alternating sequences on `[-N, N]`: `u+` with `u+_0 = +1`, and
/// its shift `u- = S u+`.
pub fn toy_sequences(radius: usize) -> (SpinSequence, SpinSequence) {
    let r = radius as i64;
    let plus = SpinSequence::from_fn(-r, r, Spin::alternating).expect("non-empty window");
    let minus = plus.negate();
    (plus, minus)
}

/// One window of the close-packed dimer process.
///
/// Draw order: first the class bit (even or odd, probability 1/2 each), then
/// one orientation bit per dimer, left to right. Even sequences have their
/// dimers on `[2j-1, 2j]`, odd ones on `[2j, 2j+1]`. Dimers cut by the window
/// edge are sampled in full and then cropped.
pub fn sample_dms(spec: &SamplerSpec) -> Result<SpinSequence> {
    spec.expect_model(Model::Dms, "sample_dms")?;
    if spec.radius == 0 {
        return Err(Error::InvalidSpec(
            "radius 0 cannot host a dimer decision".into(),
        ));
    }
    let mut rng = rng_for(spec.seed);
    let even: bool = rng.gen();
    let offset = if even { 1 } else { 0 };

    let n = spec.radius as i64;
    // leftmost dimer start b <= -N with b = offset (mod 2)
    let first = -n - (-n - offset).rem_euclid(2);
    let mut values = Vec::with_capacity(2 * spec.radius + 3);
    let mut b = first;
    while b <= n {
        let plus_first: bool = rng.gen();
        let (a, c) = if plus_first {
            (Spin::Plus, Spin::Minus)
        } else {
            (Spin::Minus, Spin::Plus)
        };
        values.push(a);
        values.push(c);
        b += 2;
    }
    SpinSequence::new(first, values)?.crop(-n, n)
}

/// One window of the factor system `Y`, as `φ` applied to a DMS window one
/// site wider on each side (so the output has the requested radius).
pub fn sample_factor_y(spec: &SamplerSpec) -> Result<SpinSequence> {
    spec.expect_model(Model::FactorY, "sample_factor_y")?;
    if spec.radius == 0 {
        return Err(Error::InvalidSpec(
            "radius 0 cannot host a dimer decision".into(),
        ));
    }
    let dms = sample_dms(&SamplerSpec::dms(spec.radius + 1, spec.seed))?;
    factor_phi(&dms)
}

/// One window of the randomly signed Thue–Morse cover.
///
/// Position `-N` carries the first letter of the Thue–Morse word; letters
/// `1`, `1̄` become magnitudes 1/5, 7/5 and each site gets an independent
/// fair sign, drawn left to right.
pub fn tm_cover_sample(spec: &SamplerSpec) -> Result<RealSequence> {
    spec.expect_model(Model::TmCover, "tm_cover_sample")?;
    let len = 2 * spec.radius + 1;
    let depth = len.next_power_of_two().trailing_zeros();
    let word = tm_word(depth);
    let mut rng = rng_for(spec.seed);
    let values = word[..len]
        .iter()
        .map(|letter| {
            let positive: bool = rng.gen();
            if positive {
                letter.cover_weight()
            } else {
                -letter.cover_weight()
            }
        })
        .collect();
    RealSequence::new(-(spec.radius as i64), values)
}

/// A sampled window of any model.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Spins(SpinSequence),
    Reals(RealSequence),
}

impl Realization {
    pub fn len(&self) -> usize {
        match self {
            Realization::Spins(w) => w.len(),
            Realization::Reals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> i64 {
        match self {
            Realization::Spins(w) => w.start(),
            Realization::Reals(v) => v.start(),
        }
    }

    pub fn as_spins(&self) -> Option<&SpinSequence> {
        match self {
            Realization::Spins(w) => Some(w),
            Realization::Reals(_) => None,
        }
    }

    /// Values as reals, in window order.
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Realization::Spins(w) => w.as_f64(),
            Realization::Reals(v) => v.values().to_vec(),
        }
    }
}

/// Dispatches on `spec.model`. The toy model picks `u+` or `u-` from the
/// first bit of the generator.
pub fn sample(spec: &SamplerSpec) -> Result<Realization> {
    Ok(match spec.model {
        Model::Toy => {
            let (plus, minus) = toy_sequences(spec.radius);
            let pick_plus: bool = rng_for(spec.seed).gen();
            Realization::Spins(if pick_plus { plus } else { minus })
        }
        Model::Dms => Realization::Spins(sample_dms(spec)?),
        Model::FactorY => Realization::Spins(sample_factor_y(spec)?),
        Model::TmCover => Realization::Reals(tm_cover_sample(spec)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{classify, SequenceClass};

    #[test]
    fn toy_pair() {
        let (p, m) = toy_sequences(1);
        assert_eq!(p, SpinSequence::from_signs(-1, &[-1, 1, -1]).unwrap());
        assert_eq!(m, SpinSequence::from_signs(-1, &[1, -1, 1]).unwrap());
        let (p, m) = toy_sequences(0);
        assert_eq!(p.values(), &[Spin::Plus]);
        assert_eq!(m.values(), &[Spin::Minus]);
        for r in 0..6 {
            let (p, m) = toy_sequences(r);
            assert_eq!(classify(&p), SequenceClass::Periodic);
            assert_eq!(classify(&m), SequenceClass::Periodic);
        }
    }

    #[test]
    fn dms_rejects_radius_zero_and_wrong_model() {
        assert!(sample_dms(&SamplerSpec::dms(0, 1)).is_err());
        assert!(sample_dms(&SamplerSpec::factor_y(5, 1)).is_err());
        assert!(sample_factor_y(&SamplerSpec::dms(5, 1)).is_err());
        assert!(tm_cover_sample(&SamplerSpec::dms(5, 1)).is_err());
    }

    #[test]
    fn dms_small_window_is_legal_and_deterministic() {
        let spec = SamplerSpec::dms(3, 42);
        let a = sample_dms(&spec).unwrap();
        let b = sample_dms(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.radius(), Some(3));
        assert_ne!(classify(&a), SequenceClass::Mixed);
    }

    #[test]
    fn dms_dimers_are_balanced() {
        // every dimer carries one + and one -, so each aligned pair sums to zero
        for seed in 0..50 {
            let w = sample_dms(&SamplerSpec::dms(20, seed)).unwrap();
            let class = classify(&w);
            let offset = match class {
                SequenceClass::Even => 1,
                SequenceClass::Odd => 0,
                _ => continue,
            };
            for b in (-20..20).filter(|b: &i64| b.rem_euclid(2) == offset) {
                assert_eq!(w.get(b).unwrap(), -w.get(b + 1).unwrap(), "seed {seed}");
            }
        }
    }

    #[test]
    fn factor_y_has_a_forced_parity_class() {
        for seed in 0..20 {
            let v = sample_factor_y(&SamplerSpec::factor_y(30, seed)).unwrap();
            assert_eq!(v.radius(), Some(30));
            let forced = |parity: i64| {
                v.iter()
                    .filter(|(n, _)| n.rem_euclid(2) == parity)
                    .all(|(_, s)| s == Spin::Plus)
            };
            assert!(forced(0) || forced(1), "seed {seed}");
        }
    }

    #[test]
    fn tm_cover_magnitudes_follow_word() {
        let v = tm_cover_sample(&SamplerSpec::tm_cover(40, 9)).unwrap();
        assert_eq!(v.len(), 81);
        let word = tm_word(7);
        for (x, letter) in v.values().iter().zip(word) {
            assert_eq!(x.abs(), letter.cover_weight());
        }
        assert_eq!(v, tm_cover_sample(&SamplerSpec::tm_cover(40, 9)).unwrap());
    }

    #[test]
    fn toy_sample_picks_one_of_the_pair() {
        let (p, m) = toy_sequences(4);
        for seed in 0..8 {
            let w = sample(&SamplerSpec::new(Model::Toy, 4, seed)).unwrap();
            let w = w.as_spins().unwrap();
            assert!(*w == p || *w == m);
        }
    }
}
