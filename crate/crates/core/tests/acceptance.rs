//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Statistical criteria use fixed seeds (DMS 1, factor Y 2, TM cover 3,
//! dynamics 100..=199). Estimators are recomputed here naively and must agree
//! with the library to 1e-9 before the tolerance comparison counts.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use dimers_core::{
    apply_weights, bragg_estimate, classify, closed_autocorr, closed_diffraction,
    dynamical_point_spectrum, eigen_relation_check, empirical_autocorr, empirical_mean,
    fejer_density, lift_real, psi_estimate, sample_dms, sample_factor_y, sigma_correlation_closed,
    sigma_density_empirical, tm_cover_sample, Model, PointPart, SamplerSpec, SequenceClass,
    WeightMap, WeightedComb,
};
use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: usize = 512;
const N_MAX: usize = 64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

// ---- naive oracles ---------------------------------------------------------

fn naive_autocorr(c: &[Complex64], n: usize) -> Complex64 {
    let l = c.len();
    let s: Complex64 = (0..l - n).map(|j| c[j] * c[j + n].conj()).sum();
    s / (l - n) as f64
}

fn naive_bragg(c: &[Complex64], start: i64, k: f64) -> f64 {
    let s: Complex64 = c
        .iter()
        .enumerate()
        .map(|(j, z)| z * Complex64::from_polar(1.0, -2.0 * PI * k * (start + j as i64) as f64))
        .sum();
    s.norm_sqr() / (c.len() * c.len()) as f64
}

fn naive_fejer(eta: &[Complex64], k: f64) -> f64 {
    let m = eta.len() - 1;
    let mut d = eta[0].re;
    for (n, e) in eta.iter().enumerate().skip(1) {
        let w = 1.0 - n as f64 / (m + 1) as f64;
        d += 2.0 * w * (e * Complex64::from_polar(1.0, -2.0 * PI * k * n as f64)).re;
    }
    d
}

fn max_grid_error(eta: &[Complex64], f: impl Fn(f64) -> f64) -> f64 {
    (0..GRID)
        .map(|g| {
            let k = g as f64 / GRID as f64;
            (naive_fejer(eta, k) - f(k)).abs()
        })
        .fold(0.0, f64::max)
}

/// Naive η̂(0..=m), after checking the library estimator agrees.
fn checked_autocorr(comb: &WeightedComb, m: usize) -> Result<Vec<Complex64>, String> {
    let lib = empirical_autocorr(comb, m).map_err(|e| e.to_string())?;
    let naive: Vec<Complex64> = (0..=m).map(|n| naive_autocorr(comb.weights(), n)).collect();
    for (n, z) in naive.iter().enumerate() {
        let got = lib.get(n as i64).unwrap();
        if (got - z).norm() > 1e-9 {
            return Err(format!("library η̂({n}) = {got} disagrees with naive {z}"));
        }
    }
    Ok(naive)
}

fn checked_bragg(comb: &WeightedComb, k: Rational64) -> Result<f64, String> {
    let kf = *k.numer() as f64 / *k.denom() as f64;
    let naive = naive_bragg(comb.weights(), comb.start(), kf);
    let lib = bragg_estimate(comb, k);
    if (naive - lib).abs() > 1e-9 {
        return Err(format!(
            "library Bragg({k}) = {lib} disagrees with naive {naive}"
        ));
    }
    Ok(naive)
}

// ---- criteria --------------------------------------------------------------

fn criterion_1() -> Result<Outcome, String> {
    let bal = WeightMap::<Rational64>::balanced();
    let dms = closed_autocorr(Model::Dms, &bal);
    let y = closed_autocorr(Model::FactorY, &bal);
    let mut bad = Vec::new();
    for n in -20i64..=20 {
        let want_dms = match n.abs() {
            0 => r(1, 1),
            1 => r(-1, 2),
            _ => r(0, 1),
        };
        let want_y = if n == 0 {
            r(1, 1)
        } else if n % 2 == 0 {
            r(1, 2)
        } else {
            r(0, 1)
        };
        if dms.value(n) != want_dms {
            bad.push(format!("η_DMS({n})"));
        }
        if y.value(n) != want_y {
            bad.push(format!("η_Y({n})"));
        }
    }

    let toy = closed_diffraction(Model::Toy, &bal);
    let half_lattice = PointPart::new(2, vec![r(0, 1), r(1, 1)]).unwrap();
    if !toy.point.same_measure(&half_lattice) || toy.ac.coeffs.iter().any(|a| *a != r(0, 1)) {
        bad.push("toy diffraction".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for _ in 0..20 {
        let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (hp, hm) = (z(), z());
        let got = closed_diffraction(Model::FactorY, &WeightMap::new(hp, hm))
            .point
            .intensities[0];
        let want = (hp * 0.75 + hm * 0.25).norm_sqr();
        if (got - want).abs() > 1e-12 {
            bad.push(format!("Y lattice intensity {got} vs {want}"));
        }
    }

    let mut exact = vec![bal];
    for _ in 0..20 {
        let mut q = || r(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        exact.push(WeightMap::new(
            Complex::new(q(), q()),
            Complex::new(q(), q()),
        ));
    }
    for h in &exact {
        for m in [Model::Toy, Model::Dms, Model::FactorY, Model::TmCover] {
            if closed_diffraction(m, h).period_mass() != closed_autocorr(m, h).value(0) {
                bad.push(format!("period mass of {m} at {h:?}"));
            }
        }
    }

    let sigma = sigma_correlation_closed();
    for n in -8i64..=8 {
        let c = r(2, 1) * dms.value(n) + dms.value(n + 1) + dms.value(n - 1);
        if c != sigma.value(n) {
            bad.push(format!("C({n})"));
        }
    }
    let want_c = |n: i64| match n.abs() {
        0 => r(1, 1),
        2 => r(-1, 2),
        _ => r(0, 1),
    };
    if (-8..=8).any(|n| sigma.value(n) != want_c(n)) {
        bad.push("C closed form".into());
    }
    Ok(outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "all exact identities hold".into()
        } else {
            bad.join("; ")
        },
    ))
}

fn criterion_2() -> Result<Outcome, String> {
    let w = sample_dms(&SamplerSpec::dms(100_000, 1)).map_err(|e| e.to_string())?;
    let comb = apply_weights(&w, &WeightMap::balanced());
    let eta = checked_autocorr(&comb, 32)?;
    let e1 = (eta[1].re + 0.5).abs();
    let tail = eta[2..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mean = empirical_mean(&comb).norm();
    let ok = eta[0] == Complex64::new(1.0, 0.0) && e1 <= 0.01 && tail <= 0.01 && mean <= 0.02;
    Ok(outcome(
        ok,
        format!(
            "η̂(0)={} |η̂(1)+1/2|={e1:.2e} max|η̂(2..32)|={tail:.2e} |mean|={mean:.2e}",
            eta[0].re
        ),
    ))
}

fn criterion_3() -> Result<Outcome, String> {
    let w = sample_dms(&SamplerSpec::dms(100_000, 1)).map_err(|e| e.to_string())?;
    let comb = apply_weights(&w, &WeightMap::balanced());
    let eta = checked_autocorr(&comb, N_MAX)?;
    let err = max_grid_error(&eta, |k| 1.0 - (2.0 * PI * k).cos());
    let lib = fejer_density(&empirical_autocorr(&comb, N_MAX).unwrap(), GRID, None).unwrap();
    let lib_err = lib.max_abs_error(|k| 1.0 - (2.0 * PI * k).cos());
    if (lib_err - err).abs() > 1e-9 {
        return Err(format!(
            "library density error {lib_err} disagrees with naive {err}"
        ));
    }
    let mut bragg = Vec::new();
    for k in [r(0, 1), r(1, 4), r(1, 3), r(1, 2)] {
        bragg.push(checked_bragg(&comb, k)?);
    }
    let worst = bragg.iter().cloned().fold(0.0, f64::max);
    Ok(outcome(
        err <= 0.05 && worst <= 0.01,
        format!(
            "max|density - (1 - cos 2πk)|={err:.4} (tol 0.05) max Bragg={worst:.2e} (tol 0.01)"
        ),
    ))
}

fn criterion_4() -> Result<Outcome, String> {
    let v = sample_factor_y(&SamplerSpec::factor_y(100_000, 2)).map_err(|e| e.to_string())?;
    let comb = apply_weights(&v, &WeightMap::balanced());
    let mean = (empirical_mean(&comb) - Complex64::new(0.5, 0.0)).norm();
    let b0 = (checked_bragg(&comb, r(0, 1))? - 0.25).abs();
    let b_half = (checked_bragg(&comb, r(1, 2))? - 0.25).abs();
    // subtract the exact peaks 1/4 on Z and Z + 1/2: ζ(n) = 1/4 (1 + (-1)^n)
    let eta: Vec<Complex64> = checked_autocorr(&comb, N_MAX)?
        .into_iter()
        .enumerate()
        .map(|(n, z)| z - if n % 2 == 0 { 0.5 } else { 0.0 })
        .collect();
    let err = max_grid_error(&eta, |_| 0.5);
    let h10 = apply_weights(&v, &WeightMap::real(1.0, 0.0));
    let b10 = (checked_bragg(&h10, r(0, 1))? - 0.5625).abs();
    let ok = mean <= 0.02 && b0 <= 0.01 && b_half <= 0.01 && err <= 0.05 && b10 <= 0.02;
    Ok(outcome(
        ok,
        format!("|mean-1/2|={mean:.2e} |B(0)-1/4|={b0:.2e} |B(1/2)-1/4|={b_half:.2e} max|density-1/2|={err:.4} |B_(1,0)(0)-9/16|={b10:.2e}"),
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let mut sign_ok = 0;
    let (mut worst_abs, mut worst_res) = (0.0f64, 0.0f64);
    for seed in 100..200u64 {
        let w = sample_dms(&SamplerSpec::dms(10_000, seed)).map_err(|e| e.to_string())?;
        let psi = psi_estimate(&w).map_err(|e| e.to_string())?;
        // independent ψ̂ over positions n = start..end-1
        let vals = w.values();
        let naive: f64 = (0..vals.len() - 1)
            .map(|j| {
                let n = w.start() + j as i64;
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                sign * f64::from(vals[j].value() * vals[j + 1].value())
            })
            .sum::<f64>()
            * 2.0
            / (vals.len() - 1) as f64;
        if (naive - psi).abs() > 1e-12 {
            return Err(format!("ψ̂ mismatch at seed {seed}"));
        }
        sign_ok += usize::from(
            matches!(
                (classify(&w), psi > 0.0),
                (SequenceClass::Even, true) | (SequenceClass::Odd, false)
            ) && psi != 0.0,
        );
        worst_abs = worst_abs.max((psi.abs() - 1.0).abs());
        worst_res = worst_res.max(eigen_relation_check(&w).map_err(|e| e.to_string())?);
    }

    let w = sample_dms(&SamplerSpec::dms(100_000, 1)).map_err(|e| e.to_string())?;
    let x: Vec<f64> = w.values().iter().map(|s| s.as_f64()).collect();
    // σ_m(w) = w_m + w_{m+1}, correlation normalised by the number of terms
    let sig: Vec<f64> = x.windows(2).map(|p| p[0] + p[1]).collect();
    let corr = |n: usize| {
        sig.iter().zip(&sig[n..]).map(|(a, b)| a * b).sum::<f64>() / (sig.len() - n) as f64
    };
    let c0 = (corr(0) - 1.0).abs();
    let c2 = (corr(2) + 0.5).abs();
    let c: Vec<Complex64> = (0..=N_MAX).map(|n| Complex64::new(corr(n), 0.0)).collect();
    let dens_err = max_grid_error(&c, |k| 1.0 - (4.0 * PI * k).cos());
    let lib = sigma_density_empirical(&w, N_MAX, GRID).map_err(|e| e.to_string())?;
    let lib_err = lib.max_abs_error(|k| 1.0 - (4.0 * PI * k).cos());
    if (lib_err - dens_err).abs() > 1e-9 {
        return Err(format!(
            "library σ density error {lib_err} vs naive {dens_err}"
        ));
    }
    let doubling = (0..GRID)
        .map(|g| {
            let k = g as f64 / GRID as f64;
            (naive_fejer(&c, k) - (1.0 - (2.0 * PI * (2.0 * k)).cos())).abs()
        })
        .fold(0.0, f64::max);
    let ok = sign_ok == 100
        && worst_abs <= 0.05
        && worst_res <= 0.05
        && c0 <= 0.02
        && c2 <= 0.02
        && dens_err <= 0.05
        && doubling <= 0.07;
    Ok(outcome(
        ok,
        format!(
            "sign {sign_ok}/100 max||ψ̂|-1|={worst_abs:.3} max|ψ̂(Sw)+ψ̂(w)|={worst_res:.3} |Ĉ(0)-1|={c0:.2e} |Ĉ(2)+1/2|={c2:.2e} max|σ density - (1 - cos 4πk)|={dens_err:.4} (tol 0.05) doubling={doubling:.4} (tol 0.07)"
        ),
    ))
}

fn criterion_6() -> Result<Outcome, String> {
    let v = tm_cover_sample(&SamplerSpec::tm_cover(1 << 14, 3)).map_err(|e| e.to_string())?;
    if v.values()
        .iter()
        .any(|x| ![0.2, -0.2, 1.4, -1.4].contains(x))
    {
        return Err("TM cover value outside {±0.2, ±1.4}".into());
    }
    let comb = lift_real(&v);
    let eta = checked_autocorr(&comb, N_MAX)?;
    let e0 = (eta[0].re - 1.0).abs();
    let tail = eta[1..=32].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = max_grid_error(&eta, |_| 1.0);
    Ok(outcome(
        e0 <= 0.02 && tail <= 0.02 && err <= 0.05,
        format!("|η̂(0)-1|={e0:.2e} max|η̂(1..32)|={tail:.2e} max|density-1|={err:.4} (tol 0.05)"),
    ))
}

fn criterion_7() -> Result<Outcome, String> {
    let spectrum = dynamical_point_spectrum(Model::Dms).map_err(|e| e.to_string())?;
    let cosets = spectrum.cosets();
    let want: std::collections::BTreeSet<_> = [r(0, 1), r(1, 2)].into_iter().collect();
    let generic = WeightMap::new(
        Complex::new(r(1, 1), r(1, 3)),
        Complex::new(r(-1, 2), r(0, 1)),
    );
    let dms_support = closed_diffraction(Model::Dms, &generic).point.support();
    let bal_support = closed_diffraction(Model::Dms, &WeightMap::<Rational64>::balanced())
        .point
        .support();
    let y_support = closed_diffraction(Model::FactorY, &generic).point.support();
    let zero: std::collections::BTreeSet<_> = [r(0, 1)].into_iter().collect();
    let ok = cosets == want
        && dms_support == zero
        && bal_support.is_empty()
        && dms_support.is_subset(&cosets)
        && dms_support != cosets
        && y_support == cosets;
    let show = |set: &std::collections::BTreeSet<Rational64>| {
        let items: Vec<String> = set.iter().map(|k| k.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    };
    Ok(outcome(
        ok,
        format!(
            "dynamical {} ⊋ DMS diffraction {} (balanced {}); factor Y {}",
            show(&cosets),
            show(&dms_support),
            show(&bal_support),
            show(&y_support)
        ),
    ))
}

type Criterion = (u8, &'static str, f64, fn() -> Result<Outcome, String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (1, "closed forms are exact", 1.0, criterion_1),
        (2, "DMS autocorrelation at N = 1e5", 2.0, criterion_2),
        (
            3,
            "DMS diffraction is absolutely continuous",
            5.0,
            criterion_3,
        ),
        (4, "factor Y diffraction", 5.0, criterion_4),
        (5, "eigenfunction and σ spectral measure", 10.0, criterion_5),
        (6, "TM cover is Lebesgue", 5.0, criterion_6),
        (
            7,
            "dynamical vs diffraction point spectrum",
            1.0,
            criterion_7,
        ),
    ];
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let started = Instant::now();
        let result = run();
        let secs = started.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && secs < limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "{} criterion {id}: {title} [{secs:.2}s / {limit}s] {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
