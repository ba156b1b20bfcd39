//! File formats: CSV (`,` separator, `.` decimal point, LF endings, metadata
//! as leading `# key=value` lines) and JSON with a `metadata` block.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::correlation::{AutocorrSeq, Normalization};
use crate::ensembles::{Realization, RNG_ALGORITHM};
use crate::spectra::{MixedMeasure, SampledDensity};
use crate::{Error, Result, VERSION};

/// Provenance carried by every emitted artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub model: String,
    pub h: String,
    pub radius: usize,
    pub seed: u64,
    pub rng: String,
    pub trials: usize,
    pub grid: usize,
    pub n_max: usize,
}

impl Metadata {
    pub fn from_config(c: &RunConfig) -> Self {
        Self {
            tool: "dimers".into(),
            version: VERSION.into(),
            model: c.model.map_or_else(|| "all".to_string(), |m| m.to_string()),
            h: c.h.to_string(),
            radius: c.radius,
            seed: c.seed,
            rng: RNG_ALGORITHM.into(),
            trials: c.trials,
            grid: c.grid,
            n_max: c.n_max,
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("tool", self.tool.clone()),
            ("version", self.version.clone()),
            ("model", self.model.clone()),
            ("h", self.h.clone()),
            ("radius", self.radius.to_string()),
            ("seed", self.seed.to_string()),
            ("rng", self.rng.clone()),
            ("trials", self.trials.to_string()),
            ("grid", self.grid.to_string()),
            ("n_max", self.n_max.to_string()),
        ]
    }

    /// Errors on the first field that differs.
    pub fn ensure_matches(&self, other: &Metadata) -> Result<()> {
        for ((name, a), (_, b)) in self.fields().into_iter().zip(other.fields()) {
            if a != b {
                return Err(Error::MetadataMismatch {
                    field: name.into(),
                    expected: a,
                    found: b,
                });
            }
        }
        Ok(())
    }

    pub fn csv_header(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("# {k}={v}\n"))
            .collect()
    }

    fn from_csv_comments<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Option<Self>> {
        let mut meta = serde_json::Map::new();
        for line in lines {
            if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
                let value = match k {
                    "radius" | "seed" | "trials" | "grid" | "n_max" => serde_json::Value::Number(
                        v.parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad metadata `{line}`")))?
                            .into(),
                    ),
                    _ => serde_json::Value::String(v.to_string()),
                };
                meta.insert(k.to_string(), value);
            }
        }
        if meta.is_empty() {
            return Ok(None);
        }
        Ok(Some(serde_json::from_value(serde_json::Value::Object(
            meta,
        ))?))
    }
}

/// Writes `contents`, creating parent directories; errors name the path.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, contents).map_err(io_err)
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn split_csv(text: &str) -> (Vec<&str>, Vec<&str>) {
    text.lines().partition(|l| l.starts_with('#'))
}

/// `position,value` rows; spins as `1`/`-1`, reals in shortest round-trip form.
pub fn sequence_csv(seq: &Realization, meta: &Metadata) -> String {
    let mut out = meta.csv_header();
    out.push_str("position,value\n");
    let start = seq.start();
    match seq {
        Realization::Spins(w) => {
            for (pos, s) in w.iter() {
                writeln!(out, "{pos},{}", s.value()).unwrap();
            }
        }
        Realization::Reals(v) => {
            for (i, x) in v.values().iter().enumerate() {
                writeln!(out, "{},{x}", start + i as i64).unwrap();
            }
        }
    }
    out
}

/// A parsed `position,value` file.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTable {
    pub metadata: Option<Metadata>,
    pub start: i64,
    pub values: Vec<f64>,
}

pub fn parse_sequence_csv(text: &str) -> Result<SequenceTable> {
    let (comments, rows) = split_csv(text);
    let metadata = Metadata::from_csv_comments(comments.into_iter())?;
    let mut rows = rows.into_iter().filter(|l| !l.trim().is_empty());
    match rows.next() {
        Some("position,value") => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header `position,value`, got {other:?}"
            )))
        }
    }
    let mut start = None;
    let mut values = Vec::new();
    for (i, row) in rows.enumerate() {
        let bad = || Error::Parse(format!("bad row `{row}`"));
        let (p, v) = row.split_once(',').ok_or_else(bad)?;
        let p: i64 = p.parse().map_err(|_| bad())?;
        let first = *start.get_or_insert(p);
        if p != first + i as i64 {
            return Err(Error::Parse(format!(
                "positions are not contiguous at `{row}`"
            )));
        }
        values.push(v.parse().map_err(|_| bad())?);
    }
    Ok(SequenceTable {
        metadata,
        start: start.ok_or_else(|| Error::Parse("no rows".into()))?,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub metadata: Metadata,
    /// Largest `r` with `[-r, r]` inside the window.
    pub radius: usize,
    pub origin_index: usize,
    pub values: Vec<f64>,
}

pub fn sequence_json(seq: &Realization, meta: &Metadata) -> Result<String> {
    let start = seq.start();
    let end = start + seq.len() as i64 - 1;
    if start > 0 || end < 0 {
        return Err(Error::range(
            "sequence_json",
            "window does not contain the origin",
        ));
    }
    let doc = SequenceJson {
        metadata: meta.clone(),
        radius: (-start).min(end) as usize,
        origin_index: (-start) as usize,
        values: seq.to_f64(),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// `lag,re,im` rows for lags `0..=max_lag`.
pub fn autocorr_csv(a: &AutocorrSeq, meta: &Metadata) -> String {
    let mut out = meta.csv_header();
    out.push_str("lag,re,im\n");
    for (n, c) in a.coefficients.iter().enumerate() {
        writeln!(out, "{n},{},{}", c.re, c.im).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrJson {
    pub metadata: Metadata,
    pub normalization: Normalization,
    pub window_len: usize,
    pub max_lag: usize,
    /// `[re, im]` per lag.
    pub coefficients: Vec<[f64; 2]>,
}

impl AutocorrJson {
    pub fn new(a: &AutocorrSeq, meta: &Metadata) -> Self {
        Self {
            metadata: meta.clone(),
            normalization: a.normalization,
            window_len: a.window_len,
            max_lag: a.max_lag,
            coefficients: a.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_autocorr(&self) -> AutocorrSeq {
        AutocorrSeq {
            max_lag: self.max_lag,
            coefficients: self
                .coefficients
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
            normalization: self.normalization,
            window_len: self.window_len,
        }
    }
}

/// `k,value` rows.
pub fn density_csv(d: &SampledDensity, meta: &Metadata) -> String {
    let mut out = meta.csv_header();
    out.push_str("k,value\n");
    for (k, v) in d.grid.iter().zip(&d.values) {
        writeln!(out, "{k},{v}").unwrap();
    }
    out
}

/// `{"point": {"q", "intensities"}, "ac": {"coeffs"}}`.
pub fn measure_json(m: &MixedMeasure<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(m)? + "\n")
}
