//! `dimers`: sample the dimer models, estimate their correlations and
//! diffraction, and verify the estimates against the exact results.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dimers_core::config::RunConfig;
use dimers_core::dynamics::{dynamics_report, DynamicsReport};
use dimers_core::io::{self, AutocorrJson, Metadata};
use dimers_core::svg::{LinePlot, Marker, Series};
use dimers_core::verify::{self, VerifyReport};
use dimers_core::{
    apply_weights, closed_autocorr, closed_diffraction, detect_bragg, empirical_autocorr,
    fejer_density, lift_real, periodogram, sample, sigma_density_empirical, sigma_spectral_density,
    AutocorrSeq, BraggPeak, MixedMeasure, Model, Periodogram, PointPart, Realization,
    SampledDensity, SamplerSpec, WeightMap, WeightedComb,
};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "dimers", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one window and write it as CSV/JSON.
    Sample(RunArgs),
    /// Empirical autocorrelation, averaged over trials, next to the exact one.
    Autocorr(RunArgs),
    /// Averaged periodogram, Bragg peaks and Fejér density against the exact diffraction.
    Diffract(RunArgs),
    /// Eigenfunction estimate and σ spectral density per trial.
    Dynamics(RunArgs),
    /// Run the verification suite, or check an autocorrelation artifact.
    Verify(VerifyArgs),
}

/// Flags override values read from `--config`.
#[derive(Args)]
struct RunArgs {
    /// Plain-text `key=value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// toy, dms, factory, tmcover (or `all` for verify).
    #[arg(long)]
    model: Option<String>,
    /// Weights `h_plus,h_minus`, e.g. `1,-1` or `1+0.5i,0`.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    no_csv: bool,
    #[arg(long)]
    no_json: bool,
    /// Replace every statistical tolerance of `verify`.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Autocorrelation JSON written by `autocorr`; its metadata must match the flags.
    #[arg(long)]
    artifact: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            c.apply_file_text(&io::read_file(path)?)
                .with_context(|| format!("in config file {}", path.display()))?;
        }
        let text_flags = [
            ("model", self.model.clone()),
            ("h", self.h.clone()),
            ("radius", self.radius.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("grid", self.grid.map(|v| v.to_string())),
            ("n_max", self.n_max.map(|v| v.to_string())),
            ("tolerance", self.tolerance.map(|v| v.to_string())),
        ];
        for (key, value) in text_flags {
            if let Some(v) = value {
                c.set(key, &v)
                    .with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        if let Some(out) = &self.out {
            c.out_dir = out.clone();
        }
        c.emit.svg |= self.svg;
        c.emit.csv &= !self.no_csv;
        c.emit.json &= !self.no_json;
        c.validate()?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => a.config().and_then(|c| cmd_sample(&c)),
        Command::Autocorr(a) => a.config().and_then(|c| cmd_autocorr(&c)),
        Command::Diffract(a) => a.config().and_then(|c| cmd_diffract(&c)),
        Command::Dynamics(a) => a.config().and_then(|c| cmd_dynamics(&c)),
        Command::Verify(a) => {
            return match a
                .run
                .config()
                .and_then(|c| cmd_verify(&c, a.artifact.as_deref()))
            {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::FAILURE,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(c: &RunConfig, model: Model, what: &str, ext: &str) -> PathBuf {
    c.out_dir.join(format!("{model}-{what}.{ext}"))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    io::write_file(path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn draw(c: &RunConfig, model: Model, seed: u64) -> Result<Realization> {
    Ok(sample(&SamplerSpec::new(model, c.radius, seed))?)
}

fn comb(r: &Realization, h: &WeightMap) -> WeightedComb {
    match r {
        Realization::Spins(w) => apply_weights(w, h),
        Realization::Reals(v) => lift_real(v),
    }
}

/// One weighted window per trial, seeds `seed, seed + 1, ...`, drawn in parallel.
fn trial_combs(c: &RunConfig, model: Model) -> Result<Vec<WeightedComb>> {
    (0..c.trials)
        .into_par_iter()
        .map(|i| Ok(comb(&draw(c, model, c.trial_seed(i))?, &c.h)))
        .collect()
}

fn mean_autocorr(combs: &[WeightedComb], n_max: usize) -> Result<AutocorrSeq> {
    let all: Vec<AutocorrSeq> = combs
        .par_iter()
        .map(|cb| empirical_autocorr(cb, n_max))
        .collect::<dimers_core::Result<_>>()?;
    let mut mean = all[0].clone();
    for a in &all[1..] {
        for (m, x) in mean.coefficients.iter_mut().zip(&a.coefficients) {
            *m += x;
        }
    }
    mean.coefficients
        .iter_mut()
        .for_each(|m| *m /= all.len() as f64);
    Ok(mean)
}

fn cmd_sample(c: &RunConfig) -> Result<()> {
    let model = c.single_model();
    let meta = c.metadata();
    let r = draw(c, model, c.seed)?;
    if c.emit.csv {
        write(
            &output(c, model, "sample", "csv"),
            &io::sequence_csv(&r, &meta),
        )?;
    }
    if c.emit.json {
        write(
            &output(c, model, "sample", "json"),
            &io::sequence_json(&r, &meta)?,
        )?;
    }
    Ok(())
}

fn cmd_autocorr(c: &RunConfig) -> Result<()> {
    let model = c.single_model();
    let meta = c.metadata();
    let eta = mean_autocorr(&trial_combs(c, model)?, c.n_max)?;
    let exact = closed_autocorr(model, &c.h);
    println!("{:>5} {:>22} {:>12}", "lag", "empirical", "exact");
    for n in 0..=c.n_max.min(8) {
        let e = eta.coefficients[n];
        println!(
            "{n:>5} {:>11.6}{:+.6}i {:>12.6}",
            e.re,
            e.im,
            exact.value(n as i64)
        );
    }
    if c.emit.csv {
        write(
            &output(c, model, "autocorr", "csv"),
            &io::autocorr_csv(&eta, &meta),
        )?;
    }
    if c.emit.json {
        write(
            &output(c, model, "autocorr", "json"),
            &to_json(&AutocorrJson::new(&eta, &meta))?,
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DiffractionJson<'a> {
    metadata: &'a Metadata,
    peaks: &'a [BraggPeak],
    exact: &'a MixedMeasure<f64>,
    density_max_abs_error: f64,
}

/// Point part on `(1/12) Z` (covers every `q <= 4`) made of the declared peaks.
fn declared_point_part(peaks: &[BraggPeak]) -> Option<PointPart<f64>> {
    let mut intensities = vec![0.0; 12];
    let mut any = false;
    for p in peaks.iter().filter(|p| p.declared) {
        let r = p.k * Rational64::from_integer(12);
        intensities[r.to_integer() as usize] = p.intensity;
        any = true;
    }
    any.then(|| PointPart::new(12, intensities).expect("intensities are nonnegative"))
}

fn cmd_diffract(c: &RunConfig) -> Result<()> {
    let model = c.single_model();
    let meta = c.metadata();
    let combs = trial_combs(c, model)?;
    let pgrams: Vec<Periodogram> = combs
        .par_iter()
        .map(|cb| periodogram(cb, c.grid))
        .collect::<dimers_core::Result<_>>()?;
    let pgram = Periodogram::average(&pgrams)?;
    let peaks = detect_bragg(&combs, &pgram, 4)?;
    let point = declared_point_part(&peaks);
    let density = fejer_density(&mean_autocorr(&combs, c.n_max)?, c.grid, point.as_ref())?;
    let exact = closed_diffraction(model, &c.h.to_f64());
    let err = density.max_abs_error(|k| exact.ac.eval(k));

    for p in peaks.iter().filter(|p| p.declared) {
        let want = exact.point.intensity_at(p.k);
        println!(
            "Bragg peak at k = {}: {:.6} (exact {want:.6})",
            p.k, p.intensity
        );
    }
    println!("density: max abs deviation from exact {err:.6}");

    if c.emit.csv {
        let pg = SampledDensity {
            grid: pgram.grid.clone(),
            values: pgram.values.clone(),
        };
        write(
            &output(c, model, "periodogram", "csv"),
            &io::density_csv(&pg, &meta),
        )?;
        write(
            &output(c, model, "density", "csv"),
            &io::density_csv(&density, &meta),
        )?;
    }
    if c.emit.json {
        let doc = DiffractionJson {
            metadata: &meta,
            peaks: &peaks,
            exact: &exact,
            density_max_abs_error: err,
        };
        write(&output(c, model, "diffraction", "json"), &to_json(&doc)?)?;
    }
    if c.emit.svg {
        let plot = LinePlot {
            title: format!(
                "{model} diffraction, N = {}, {} trial(s)",
                c.radius, c.trials
            ),
            x_label: "k".into(),
            y_label: "density / intensity".into(),
            series: vec![
                Series {
                    name: "periodogram".into(),
                    points: pgram
                        .grid
                        .iter()
                        .copied()
                        .zip(pgram.values.iter().copied())
                        .collect(),
                    color: "#bbbbbb",
                    dashed: false,
                },
                Series {
                    name: "Fejér density".into(),
                    points: density
                        .grid
                        .iter()
                        .copied()
                        .zip(density.values.iter().copied())
                        .collect(),
                    color: "#1f77b4",
                    dashed: false,
                },
                Series {
                    name: "exact density".into(),
                    points: density
                        .grid
                        .iter()
                        .map(|&k| (k, exact.ac.eval(k)))
                        .collect(),
                    color: "#d62728",
                    dashed: true,
                },
            ],
            markers: peaks
                .iter()
                .filter(|p| p.declared)
                .map(|p| Marker {
                    x: *p.k.numer() as f64 / *p.k.denom() as f64,
                    height: p.intensity,
                    label: format!("{} ({:.3})", p.k, p.intensity),
                })
                .collect(),
        };
        write(&output(c, model, "diffraction", "svg"), &plot.render())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DynamicsJson<'a> {
    metadata: &'a Metadata,
    reports: &'a [DynamicsReport],
}

fn cmd_dynamics(c: &RunConfig) -> Result<()> {
    let model = c.single_model();
    if model == Model::TmCover {
        bail!("dynamics needs a ±1-valued model (toy, dms or factory)");
    }
    let meta = c.metadata();
    let windows: Vec<_> = (0..c.trials)
        .into_par_iter()
        .map(|i| match draw(c, model, c.trial_seed(i))? {
            Realization::Spins(w) => Ok(w),
            Realization::Reals(_) => unreachable!("spin models yield spins"),
        })
        .collect::<Result<_>>()?;
    let reports: Vec<DynamicsReport> = windows
        .par_iter()
        .map(|w| dynamics_report(w, c.n_max, c.grid))
        .collect::<dimers_core::Result<_>>()?;
    for (i, r) in reports.iter().enumerate() {
        println!(
            "seed {}: class {:?}, psi {:+.6}, |psi(Sw) + psi(w)| {:.2e}, sigma density error {:.6}",
            c.trial_seed(i),
            r.class,
            r.psi_hat,
            r.eigen_residual,
            r.sigma_density_error
        );
    }
    if c.emit.json {
        let doc = DynamicsJson {
            metadata: &meta,
            reports: &reports,
        };
        write(&output(c, model, "dynamics", "json"), &to_json(&doc)?)?;
    }
    if c.emit.csv || c.emit.svg {
        let density = sigma_density_empirical(&windows[0], c.n_max, c.grid)?;
        if c.emit.csv {
            write(
                &output(c, model, "sigma-density", "csv"),
                &io::density_csv(&density, &meta),
            )?;
        }
        if c.emit.svg {
            let exact = sigma_spectral_density();
            let plot = LinePlot {
                title: format!("σ spectral density, {model}, seed {}", c.seed),
                x_label: "k".into(),
                y_label: "density".into(),
                series: vec![
                    Series {
                        name: "Fejér estimate".into(),
                        points: density
                            .grid
                            .iter()
                            .copied()
                            .zip(density.values.iter().copied())
                            .collect(),
                        color: "#1f77b4",
                        dashed: false,
                    },
                    Series {
                        name: "1 - cos 4πk".into(),
                        points: density.grid.iter().map(|&k| (k, exact.eval(k))).collect(),
                        color: "#d62728",
                        dashed: true,
                    },
                ],
                markers: Vec::new(),
            };
            write(&output(c, model, "sigma-density", "svg"), &plot.render())?;
        }
    }
    Ok(())
}

fn cmd_verify(c: &RunConfig, artifact: Option<&Path>) -> Result<bool> {
    let report: VerifyReport = match artifact {
        Some(path) => {
            let doc: AutocorrJson = serde_json::from_str(&io::read_file(path)?)
                .with_context(|| format!("reading {}", path.display()))?;
            verify::verify_autocorr_artifact(c, &doc)
                .with_context(|| format!("refusing to compare {}", path.display()))?
        }
        None => verify::run_suite(c)?,
    };
    print!("{}", report.summary());
    if c.emit.json {
        write(&c.out_dir.join("verify-report.json"), &to_json(&report)?)?;
    }
    Ok(report.passed)
}
