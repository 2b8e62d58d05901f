use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use quasidense::{Axis, Lattice};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// `min:max:step` per axis, comma separated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec(pub Vec<Axis>);

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let axes = s
            .split(',')
            .map(|part| {
                let nums: Vec<f64> = part
                    .split(':')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| format!("{part:?}: {e}"))
                    })
                    .collect::<Result<_, _>>()?;
                match nums[..] {
                    [min, max, step] => Axis::new(min, max, step).map_err(|e| e.to_string()),
                    _ => Err(format!("axis {part:?} is not min:max:step")),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridSpec(axes))
    }
}

impl GridSpec {
    pub fn lattice(&self) -> Result<Lattice, CliError> {
        Lattice::new(self.0.clone()).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol_exact: f64,
    pub tol_opt: f64,
    pub truncation: usize,
    #[serde(skip)]
    pub grid: Option<GridSpec>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("tol-exact", self.tol_exact), ("tol-opt", self.tol_opt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "--{name} must be positive, got {v}"
                )));
            }
        }
        if self.truncation < 8 {
            return Err(CliError::Config(format!(
                "--truncation must be at least 8, got {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// Where to write `name`: `--out` (relative to `QDLAB_OUT_DIR` when set),
    /// else `QDLAB_OUT_DIR/name.ext`, else stdout.
    pub fn destination(&self, name: &str, out_dir: Option<PathBuf>) -> Option<PathBuf> {
        match (&self.out, out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => Some(dir.join(format!("{name}.{}", self.format.extension()))),
            (None, None) => None,
        }
    }
}
