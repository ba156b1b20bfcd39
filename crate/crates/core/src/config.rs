//! Run configuration shared by every subcommand, loadable from a plain
//! `key=value` file.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::correlation::WeightMap;
use crate::io::Metadata;
use crate::{Error, Model, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Emit {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `None` selects every model (only meaningful for `verify`).
    pub model: Option<Model>,
    pub h: WeightMap,
    pub radius: usize,
    pub seed: u64,
    pub trials: usize,
    pub grid: usize,
    pub n_max: usize,
    pub out_dir: PathBuf,
    pub emit: Emit,
    /// Replaces every statistical tolerance of `verify` when set.
    pub tolerance: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            h: WeightMap::balanced(),
            radius: 1000,
            seed: 1,
            trials: 1,
            grid: 512,
            n_max: 64,
            out_dir: PathBuf::from("out"),
            emit: Emit::default(),
            tolerance: None,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Parse(format!(
            "`{key}` expects a boolean, got `{value}`"
        ))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("`{key}` expects a number, got `{value}`")))
}

impl RunConfig {
    /// Model used by commands that need exactly one (defaults to the DMS).
    pub fn single_model(&self) -> Model {
        self.model.unwrap_or(Model::Dms)
    }

    /// Sets one field from its textual form. Keys match the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "model" => {
                self.model = match value {
                    "all" => None,
                    m => Some(m.parse()?),
                }
            }
            "h" | "weights" => self.h = value.parse()?,
            "radius" | "n" => self.radius = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "grid" | "g" => self.grid = parse_num(key, value)?,
            "n_max" => self.n_max = parse_num(key, value)?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "csv" => self.emit.csv = parse_bool(key, value)?,
            "json" => self.emit.json = parse_bool(key, value)?,
            "svg" => self.emit.svg = parse_bool(key, value)?,
            "tolerance" => self.tolerance = Some(parse_num(key, value)?),
            other => return Err(Error::Parse(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected key=value, got `{line}`",
                    lineno + 1
                ))
            })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius),
            ("trials", self.trials),
            ("n_max", self.n_max),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidSpec(format!("{name} must be positive")));
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidSpec("grid must be at least 2".into()));
        }
        if self.n_max > 2 * self.radius {
            return Err(Error::InvalidSpec(format!(
                "n_max {} exceeds the window span 2N = {}",
                self.n_max,
                2 * self.radius
            )));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t < 0.0 {
                return Err(Error::InvalidSpec("tolerance must be nonnegative".into()));
            }
        }
        Ok(())
    }

    /// Seed of trial `i`: `seed + i` (wrapping).
    pub fn trial_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }

    pub fn metadata(&self) -> Metadata {
        Metadata::from_config(self)
    }
}
