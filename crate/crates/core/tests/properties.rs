use dimers_core::{
    apply_weights, classify, closed_autocorr, closed_diffraction, empirical_autocorr, factor_phi,
    periodogram_with, shift, sigma_correlation_closed, sigma_spectral_density, Model,
    PeriodogramMethod, SequenceClass, Spin, SpinSequence, WeightMap, WeightedComb,
};
use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational64> {
    (-12i64..=12, 1i64..=12).prop_map(|(p, q)| Rational64::new(p, q))
}

fn complex_rational() -> impl Strategy<Value = Complex<Rational64>> {
    (rational(), rational()).prop_map(|(a, b)| Complex::new(a, b))
}

fn weights() -> impl Strategy<Value = WeightMap<Rational64>> {
    (complex_rational(), complex_rational()).prop_map(|(p, m)| WeightMap::new(p, m))
}

fn model() -> impl Strategy<Value = Model> {
    prop::sample::select(Model::ALL.to_vec())
}

fn spins(max_radius: usize) -> impl Strategy<Value = SpinSequence> {
    (1..=max_radius).prop_flat_map(|r| {
        prop::collection::vec(any::<bool>(), 2 * r + 1).prop_map(|bits| {
            let values = bits
                .into_iter()
                .map(|b| if b { Spin::Plus } else { Spin::Minus })
                .collect();
            SpinSequence::symmetric(values).unwrap()
        })
    })
}

fn comb() -> impl Strategy<Value = WeightedComb> {
    (
        -50i64..50,
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..300),
    )
        .prop_map(|(start, w)| {
            WeightedComb::new(
                start,
                w.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
            )
            .unwrap()
        })
}

proptest! {
    #[test]
    fn scaling_weights_scales_measures_by_abs_square(m in model(), h in weights(), z in complex_rational()) {
        let scaled = closed_diffraction(m, &h.scaled(&z));
        let expected = closed_diffraction(m, &h);
        if m == Model::TmCover {
            // the cover's scattering strengths are fixed; h plays no role
            prop_assert_eq!(scaled, expected);
        } else {
            prop_assert_eq!(scaled, expected.scaled(&z.norm_sqr()));
        }
    }

    #[test]
    fn period_mass_is_zero_lag_autocorrelation(m in model(), h in weights()) {
        prop_assert_eq!(closed_diffraction(m, &h).period_mass(), closed_autocorr(m, &h).value(0));
    }

    #[test]
    fn closed_and_poisson_paths_agree(m in model(), h in weights()) {
        prop_assert_eq!(closed_autocorr(m, &h).transform().unwrap(), closed_diffraction(m, &h));
    }

    #[test]
    fn densities_are_nonnegative(m in model(), h in weights()) {
        let d = closed_diffraction(m, &h).ac.to_f64();
        prop_assert!(d.min_on_grid(1024) >= -1e-12);
    }

    #[test]
    fn empirical_autocorrelation_is_hermitian(c in comb()) {
        let m = (c.len() - 1).min(20);
        let a = empirical_autocorr(&c, m).unwrap();
        for n in 0..=m as i64 {
            prop_assert_eq!(a.get(-n).unwrap(), a.get(n).unwrap().conj());
        }
        let mean_sq = c.weights().iter().map(|z| z.norm_sqr()).sum::<f64>() / c.len() as f64;
        prop_assert!((a.get(0).unwrap().re - mean_sq).abs() <= 1e-12 * mean_sq.max(1.0));
        prop_assert_eq!(a.get(0).unwrap().im, 0.0);
    }

    #[test]
    fn periodogram_paths_agree_and_are_nonnegative(c in comb(), g in 2usize..200) {
        let fft = periodogram_with(&c, g, PeriodogramMethod::Fft).unwrap();
        let direct = periodogram_with(&c, g, PeriodogramMethod::Direct).unwrap();
        let scale = direct.values.iter().cloned().fold(1.0, f64::max);
        for (a, b) in fft.values.iter().zip(&direct.values) {
            prop_assert!(*a >= 0.0 && *b >= 0.0);
            prop_assert!((a - b).abs() <= 1e-9 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn phi_is_blind_to_global_flip(w in spins(40)) {
        prop_assert_eq!(factor_phi(&w).unwrap(), factor_phi(&w.negate()).unwrap());
    }

    #[test]
    fn phi_commutes_with_shift(w in spins(40)) {
        prop_assume!(w.radius().unwrap() >= 2);
        let a = factor_phi(&shift(&w, 1).unwrap()).unwrap();
        let b = shift(&factor_phi(&w).unwrap(), 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn phi_is_elementwise(w in spins(40)) {
        let v = factor_phi(&w).unwrap();
        for (n, s) in v.iter() {
            let want = -(w.get(n).unwrap().value() * w.get(n + 1).unwrap().value());
            prop_assert_eq!(s.value(), want);
        }
    }

    #[test]
    fn classification_matches_brute_force(w in spins(12)) {
        let m: Vec<i64> = (w.start()..w.end()).filter(|&n| w.get(n) == w.get(n + 1)).collect();
        let even = m.iter().any(|n| n.rem_euclid(2) == 0);
        let odd = m.iter().any(|n| n.rem_euclid(2) == 1);
        let want = match (even, odd) {
            (false, false) => SequenceClass::Periodic,
            (true, false) => SequenceClass::Even,
            (false, true) => SequenceClass::Odd,
            (true, true) => SequenceClass::Mixed,
        };
        prop_assert_eq!(classify(&w), want);
    }

    #[test]
    fn weights_substitute_pointwise(w in spins(20), h in weights()) {
        let c = apply_weights(&w, &h.to_f64());
        for (i, (_, s)) in w.iter().enumerate() {
            let want = if s == Spin::Plus { h.h_plus } else { h.h_minus };
            let want = Complex64::new(*want.re.numer() as f64 / *want.re.denom() as f64, *want.im.numer() as f64 / *want.im.denom() as f64);
            prop_assert!((c.weights()[i] - want).norm() < 1e-15);
        }
    }
}

#[test]
fn sigma_density_coefficients_are_sigma_correlations() {
    let d = sigma_spectral_density();
    let c = sigma_correlation_closed();
    for n in -10..=10 {
        assert_eq!(d.fourier_coefficient(n), c.value(n), "n = {n}");
    }
}
