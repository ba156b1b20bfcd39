//! The verification suite run by `dimers verify`: exact closed-form checks
//! plus fixed-seed finite-window statistics, each compared against the exact
//! value at a pinned tolerance.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::correlation::{
    apply_weights, closed_autocorr, empirical_autocorr, empirical_mean, lift_real,
    sigma_correlation_closed, sigma_correlation_empirical, statistical_tolerance, WeightMap,
};
use crate::dynamics::{
    dynamical_point_spectrum, eigen_relation_check, psi_estimate, sigma_density_empirical,
    sigma_spectral_density,
};
use crate::ensembles::{
    classify, sample_dms, sample_factor_y, tm_cover_sample, SamplerSpec, SequenceClass,
};
use crate::io::{AutocorrJson, Metadata};
use crate::spectra::{bragg_estimate, closed_diffraction, fejer_density, PointPart};
use crate::{Model, Result};

/// Window radius of the DMS and factor-`Y` statistics.
pub const STAT_RADIUS: usize = 100_000;
/// Window radius of each dynamics sample.
pub const DYNAMICS_RADIUS: usize = 10_000;
pub const DYNAMICS_SAMPLES: usize = 100;
/// Window radius of the Thue–Morse cover statistics.
pub const TM_RADIUS: usize = 1 << 14;
/// Largest lag of the autocorrelation statistics.
pub const STAT_MAX_LAG: usize = 32;
/// Number of random weight pairs in the exact suite.
pub const WEIGHT_PAIRS: usize = 20;

/// Seed offsets from the base seed: DMS, factor `Y`, TM cover, first dynamics sample.
pub const DMS_SEED_OFFSET: u64 = 0;
pub const FACTOR_SEED_OFFSET: u64 = 1;
pub const TM_SEED_OFFSET: u64 = 2;
pub const DYNAMICS_SEED_OFFSET: u64 = 99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: String,
    pub observed: String,
    /// Distance between observed and expected in the check's own metric.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Which closed-form result the expectation comes from.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub metadata: Metadata,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(metadata: Metadata, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            metadata,
            checks,
            passed,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let label = match c.criterion {
                0 => c.name.clone(),
                n => format!("{n}. {}", c.name),
            };
            out.push_str(&format!(
                "[{}] {label}: observed {} expected {} (deviation {:.3e}, tolerance {:.3e})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.observed,
                c.expected,
                c.deviation,
                c.tolerance
            ));
        }
        out.push_str(if self.passed {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

struct Suite<'a> {
    config: &'a RunConfig,
    checks: Vec<Check>,
    criterion: u8,
}

impl Suite<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.config.tolerance.unwrap_or(default)
    }

    /// `|observed - expected| <= tol`, with `tol` overridable from the config.
    fn close(&mut self, name: &str, observed: f64, expected: f64, tol: f64, provenance: &str) {
        let tol = self.tol(tol);
        let dev = (observed - expected).abs();
        self.push(
            name,
            format!("{expected}"),
            format!("{observed}"),
            dev,
            tol,
            dev <= tol,
            provenance,
        );
    }

    /// `observed <= bound`, with `bound` overridable from the config.
    fn at_most(&mut self, name: &str, observed: f64, bound: f64, provenance: &str) {
        let bound = self.tol(bound);
        self.push(
            name,
            format!("<= {bound}"),
            format!("{observed}"),
            observed,
            bound,
            observed <= bound,
            provenance,
        );
    }

    fn exact(
        &mut self,
        name: &str,
        ok: bool,
        expected: String,
        observed: String,
        provenance: &str,
    ) {
        self.push(
            name,
            expected,
            observed,
            if ok { 0.0 } else { 1.0 },
            0.0,
            ok,
            provenance,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        name: &str,
        expected: String,
        observed: String,
        deviation: f64,
        tolerance: f64,
        passed: bool,
        provenance: &str,
    ) {
        self.checks.push(Check {
            criterion: self.criterion,
            name: name.into(),
            expected,
            observed,
            deviation,
            tolerance,
            passed,
            provenance: provenance.into(),
        });
    }

    fn runtime(&mut self, started: Instant, limit_secs: f64) {
        let secs = started.elapsed().as_secs_f64();
        self.push(
            "runtime (s)",
            format!("< {limit_secs}"),
            format!("{secs:.3}"),
            secs,
            limit_secs,
            secs < limit_secs,
            "runtime budget",
        );
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational64 {
    Rational64::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Random exact complex weight pairs, seeded from `seed`.
pub fn random_exact_weights(seed: u64, count: usize) -> Vec<WeightMap<Rational64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut z = || Complex::new(random_rational(&mut rng), random_rational(&mut rng));
            WeightMap::new(z(), z())
        })
        .collect()
}

/// Random floating-point complex weight pairs with components in `[-2, 2)`.
pub fn random_float_weights(seed: u64, count: usize) -> Vec<WeightMap<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            WeightMap::new(z(), z())
        })
        .collect()
}

fn applies(model: Option<Model>, models: &[Model]) -> bool {
    model.is_none_or(|m| models.contains(&m))
}

/// Runs every criterion relevant to `config.model` (all of them when unset).
pub fn run_suite(config: &RunConfig) -> Result<VerifyReport> {
    let mut s = Suite {
        config,
        checks: Vec::new(),
        criterion: 0,
    };
    let m = config.model;
    exact_suite(&mut s);
    if applies(m, &[Model::Dms]) {
        dms_suite(&mut s)?;
    }
    if applies(m, &[Model::FactorY]) {
        factor_suite(&mut s)?;
    }
    if applies(m, &[Model::Dms]) {
        dynamics_suite(&mut s)?;
    }
    if applies(m, &[Model::TmCover]) {
        tm_suite(&mut s)?;
    }
    if applies(m, &[Model::Toy, Model::Dms, Model::FactorY]) {
        discrepancy_suite(&mut s)?;
    }
    Ok(VerifyReport::new(config.metadata(), s.checks))
}

fn show_values(v: &[Rational64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn exact_suite(s: &mut Suite) {
    s.criterion = 1;
    let started = Instant::now();
    let r = |p, q| Rational64::new(p, q);
    let balanced = WeightMap::<Rational64>::balanced();

    let dms = closed_autocorr(Model::Dms, &balanced);
    let ok = (-16..=16).all(|n| {
        let want = match n {
            0 => r(1, 1),
            1 | -1 => r(-1, 2),
            _ => r(0, 1),
        };
        dms.value(n) == want
    });
    s.exact(
        "DMS autocorrelation",
        ok,
        "1, -1/2, 0, ...".into(),
        show_values(&dms.values(3)),
        "DMS autocorrelation lemma",
    );

    let y = closed_autocorr(Model::FactorY, &balanced);
    let ok = (-16..=16).all(|n: i64| {
        let want = if n == 0 {
            r(1, 1)
        } else if n % 2 == 0 {
            r(1, 2)
        } else {
            r(0, 1)
        };
        y.value(n) == want
    });
    s.exact(
        "factor Y autocorrelation",
        ok,
        "1; 1/2 even; 0 odd".into(),
        show_values(&y.values(3)),
        "factor autocorrelation lemma",
    );

    let toy = closed_diffraction(Model::Toy, &balanced);
    let unit_half = PointPart::new(2, vec![r(0, 1), r(1, 1)]).unwrap();
    let ok = toy.point.same_measure(&unit_half) && toy.ac.coeffs.iter().all(|a| *a == r(0, 1));
    s.exact(
        "toy diffraction",
        ok,
        "δ at Z+1/2".into(),
        show_values(&toy.point.intensities),
        "toy diffraction via Poisson summation",
    );

    let worst = random_float_weights(s.config.seed, WEIGHT_PAIRS)
        .iter()
        .map(|h| {
            let lattice = closed_diffraction(Model::FactorY, h).point.intensities[0];
            let mean = h.h_plus * 0.75 + h.h_minus * 0.25;
            (lattice - mean.norm_sqr()).abs()
        })
        .fold(0.0, f64::max);
    s.push(
        "factor Y lattice intensity = |3/4 h+ + 1/4 h-|^2",
        "0".into(),
        format!("{worst:e}"),
        worst,
        1e-12,
        worst <= 1e-12,
        "factor diffraction, general weights",
    );

    let mut weights = random_exact_weights(s.config.seed, WEIGHT_PAIRS);
    weights.push(balanced);
    let ok = weights.iter().all(|h| {
        Model::ALL
            .iter()
            .all(|&m| closed_diffraction(m, h).period_mass() == closed_autocorr(m, h).value(0))
    });
    s.exact(
        "period mass = η(0)",
        ok,
        "equal".into(),
        if ok { "equal" } else { "differs" }.into(),
        "conservation of the decomposition",
    );

    let sigma = sigma_correlation_closed();
    let ok = (-8..=8).all(|n| dms.sigma_from_eta(n) == sigma.value(n));
    s.exact(
        "C(n) = 2η(n) + η(n+1) + η(n-1)",
        ok,
        "equal for |n| <= 8".into(),
        if ok { "equal" } else { "differs" }.into(),
        "σ spectral measure",
    );

    s.runtime(started, 1.0);
}

fn dms_suite(s: &mut Suite) -> Result<()> {
    let seed = s.config.seed.wrapping_add(DMS_SEED_OFFSET);
    let h = WeightMap::balanced();
    let started = Instant::now();
    s.criterion = 2;
    let w = sample_dms(&SamplerSpec::dms(STAT_RADIUS, seed))?;
    let comb = apply_weights(&w, &h);
    let eta = empirical_autocorr(&comb, STAT_MAX_LAG.max(s.config.n_max))?;
    let e0 = eta.get(0).unwrap();
    s.exact(
        "η̂(0) = 1",
        e0 == Complex64::new(1.0, 0.0),
        "1".into(),
        format!("{e0}"),
        "DMS autocorrelation lemma",
    );
    s.close(
        "η̂(1)",
        eta.get(1).unwrap().re,
        -0.5,
        0.01,
        "DMS autocorrelation lemma",
    );
    let tail = (2..=STAT_MAX_LAG as i64)
        .map(|n| eta.get(n).unwrap().norm())
        .fold(0.0, f64::max);
    s.at_most(
        "max_{2<=n<=32} |η̂(n)|",
        tail,
        0.01,
        "DMS autocorrelation lemma",
    );
    s.at_most(
        "|mean|",
        empirical_mean(&comb).norm(),
        0.02,
        "balanced weights",
    );
    s.runtime(started, 2.0);

    s.criterion = 3;
    let started = Instant::now();
    let eta = empirical_autocorr(&comb, s.config.n_max)?;
    let exact = closed_diffraction(Model::Dms, &h);
    let dens = fejer_density(&eta, s.config.grid, None)?;
    let err = dens.max_abs_error(|k| exact.ac.eval(k));
    s.at_most(
        "Fejér density vs 1 - cos 2πk (max abs)",
        err,
        0.05,
        "DMS diffraction is absolutely continuous",
    );
    for k in [
        Rational64::new(0, 1),
        Rational64::new(1, 4),
        Rational64::new(1, 3),
        Rational64::new(1, 2),
    ] {
        s.at_most(
            &format!("Bragg estimate at k = {k}"),
            bragg_estimate(&comb, k),
            0.01,
            "no point part for balanced weights",
        );
    }
    s.runtime(started, 5.0);
    Ok(())
}

fn factor_suite(s: &mut Suite) -> Result<()> {
    s.criterion = 4;
    let seed = s.config.seed.wrapping_add(FACTOR_SEED_OFFSET);
    let v = sample_factor_y(&SamplerSpec::factor_y(STAT_RADIUS, seed))?;
    let h = WeightMap::balanced();
    let comb = apply_weights(&v, &h);
    s.close(
        "mean",
        empirical_mean(&comb).re,
        0.5,
        0.02,
        "factor mean weight",
    );
    for k in [Rational64::new(0, 1), Rational64::new(1, 2)] {
        s.close(
            &format!("Bragg estimate at k = {k}"),
            bragg_estimate(&comb, k),
            0.25,
            0.01,
            "factor diffraction: 1/4 on Z/2",
        );
    }
    let exact = closed_diffraction(Model::FactorY, &h);
    let eta = empirical_autocorr(&comb, s.config.n_max)?;
    let dens = fejer_density(&eta, s.config.grid, Some(&exact.point))?;
    let err = dens.max_abs_error(|k| exact.ac.eval(k));
    s.at_most(
        "peak-subtracted Fejér density vs 1/2 (max abs)",
        err,
        0.05,
        "factor diffraction: density 1/2",
    );
    let h10 = WeightMap::real(1.0, 0.0);
    let b = bragg_estimate(&apply_weights(&v, &h10), Rational64::new(0, 1));
    s.close(
        "Bragg at k = 0 with h = (1, 0)",
        b,
        0.5625,
        0.02,
        "factor diffraction, general weights",
    );
    Ok(())
}

fn dynamics_suite(s: &mut Suite) -> Result<()> {
    s.criterion = 5;
    let started = Instant::now();
    let (mut sign_ok, mut worst_abs, mut worst_res) = (0usize, 0.0f64, 0.0f64);
    for i in 0..DYNAMICS_SAMPLES as u64 {
        let seed = s.config.seed.wrapping_add(DYNAMICS_SEED_OFFSET + i);
        let w = sample_dms(&SamplerSpec::dms(DYNAMICS_RADIUS, seed))?;
        let psi = psi_estimate(&w)?;
        let matches = match classify(&w) {
            SequenceClass::Even => psi > 0.0,
            SequenceClass::Odd => psi < 0.0,
            _ => false,
        };
        sign_ok += usize::from(matches);
        worst_abs = worst_abs.max((psi.abs() - 1.0).abs());
        worst_res = worst_res.max(eigen_relation_check(&w)?);
    }
    s.exact(
        "sign(ψ̂) matches parity class",
        sign_ok == DYNAMICS_SAMPLES,
        format!("{DYNAMICS_SAMPLES}/{DYNAMICS_SAMPLES}"),
        format!("{sign_ok}/{DYNAMICS_SAMPLES}"),
        "eigenfunction ψ = ±1 on even/odd sequences",
    );
    s.at_most(
        "max | |ψ̂| - 1 |",
        worst_abs,
        0.05,
        "eigenfunction ψ = ±1 on even/odd sequences",
    );
    s.at_most("max |ψ̂(Sw) + ψ̂(w)|", worst_res, 0.05, "eigenvalue -1");
    s.runtime(started, 10.0);

    let w = sample_dms(&SamplerSpec::dms(
        STAT_RADIUS,
        s.config.seed.wrapping_add(DMS_SEED_OFFSET),
    ))?;
    let c = sigma_correlation_empirical(&w, 2)?;
    s.close(
        "Ĉ(0)",
        c.get(0).unwrap().re,
        1.0,
        0.02,
        "σ spectral measure",
    );
    s.close(
        "Ĉ(2)",
        c.get(2).unwrap().re,
        -0.5,
        0.02,
        "σ spectral measure",
    );
    let dens = sigma_density_empirical(&w, s.config.n_max, s.config.grid)?;
    let exact = sigma_spectral_density();
    s.at_most(
        "σ density vs 1 - cos 4πk (max abs)",
        dens.max_abs_error(|k| exact.eval(k)),
        0.05,
        "σ spectral density",
    );
    let diffraction = closed_diffraction(Model::Dms, &WeightMap::<Rational64>::balanced());
    let doubled = dens.max_abs_error(|k| diffraction.ac.eval(2.0 * k));
    s.at_most(
        "σ density(k) vs DMS diffraction density(2k)",
        doubled,
        0.07,
        "doubling of the argument",
    );
    Ok(())
}

fn tm_suite(s: &mut Suite) -> Result<()> {
    s.criterion = 6;
    let seed = s.config.seed.wrapping_add(TM_SEED_OFFSET);
    let v = tm_cover_sample(&SamplerSpec::tm_cover(TM_RADIUS, seed))?;
    let comb = lift_real(&v);
    let eta = empirical_autocorr(&comb, STAT_MAX_LAG.max(s.config.n_max))?;
    s.close(
        "η̂(0)",
        eta.get(0).unwrap().re,
        1.0,
        0.02,
        "average squared scattering strength 1",
    );
    let tail = (1..=STAT_MAX_LAG as i64)
        .map(|n| eta.get(n).unwrap().norm())
        .fold(0.0, f64::max);
    s.at_most(
        "max_{1<=n<=32} |η̂(n)|",
        tail,
        0.02,
        "vanishing two-point correlations",
    );
    let eta = empirical_autocorr(&comb, s.config.n_max)?;
    let dens = fejer_density(&eta, s.config.grid, None)?;
    s.at_most(
        "Fejér density vs 1 (max abs)",
        dens.max_abs_error(|_| 1.0),
        0.05,
        "cover diffraction is Lebesgue",
    );
    Ok(())
}

fn discrepancy_suite(s: &mut Suite) -> Result<()> {
    s.criterion = 7;
    let dyn_cosets = dynamical_point_spectrum(Model::Dms)?.cosets();
    let mut weights = random_exact_weights(s.config.seed, WEIGHT_PAIRS);
    weights.push(WeightMap::balanced());
    let show = |set: &BTreeSet<Rational64>| {
        set.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut dms_ok = true;
    let mut y_ok = true;
    for h in &weights {
        let dms_support = closed_diffraction(Model::Dms, h).point.support();
        dms_ok &= dms_support.is_subset(&dyn_cosets) && dms_support != dyn_cosets;
        if !h.is_balanced() {
            dms_ok &= dms_support == [Rational64::from_integer(0)].into_iter().collect();
        }
        if h.h_plus != h.h_minus {
            y_ok &= closed_diffraction(Model::FactorY, h).point.support() == dyn_cosets;
        }
    }
    s.exact(
        "DMS point spectrum strictly contains diffraction point support",
        dms_ok,
        format!("{{{}}} ⊋ {{0}}", show(&dyn_cosets)),
        format!(
            "{{{}}}",
            show(&closed_diffraction(Model::Dms, &weights[0]).point.support())
        ),
        "dynamical vs diffraction spectrum",
    );
    s.exact(
        "factor Y diffraction point support = DMS point spectrum",
        y_ok && dynamical_point_spectrum(Model::FactorY)?.cosets() == dyn_cosets,
        format!("{{{}}}", show(&dyn_cosets)),
        format!(
            "{{{}}}",
            show(
                &closed_diffraction(Model::FactorY, &weights[0])
                    .point
                    .support()
            )
        ),
        "factor diffraction recovers Z/2",
    );
    Ok(())
}

/// Checks an `autocorr` JSON artifact against the closed form of its model.
/// The artifact's metadata must match `config` field by field.
pub fn verify_autocorr_artifact(
    config: &RunConfig,
    artifact: &AutocorrJson,
) -> Result<VerifyReport> {
    let expected_meta = config.metadata();
    expected_meta.ensure_matches(&artifact.metadata)?;
    let model = config.single_model();
    let closed = closed_autocorr(model, &config.h);
    let a = artifact.to_autocorr();
    let mut s = Suite {
        config,
        checks: Vec::new(),
        criterion: 0,
    };
    for n in 0..=a.max_lag {
        let observed = a.coefficients[n];
        let expected = closed.value(n as i64);
        let tol = s.tol(statistical_tolerance(a.terms(n)));
        let dev = (observed - Complex64::new(expected, 0.0)).norm();
        s.push(
            &format!("η̂({n})"),
            format!("{expected}"),
            format!("{observed}"),
            dev,
            tol,
            dev <= tol,
            "closed-form autocorrelation",
        );
    }
    Ok(VerifyReport::new(expected_meta, s.checks))
}
