//! Run configuration: a JSON file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::suites::DEFAULT_TOLERANCES;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0, nx: 11, ny: 11 }
    }
}

impl Grid {
    pub fn xs(&self) -> Vec<f64> {
        axis(self.x0, self.x1, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        axis(self.y0, self.y1, self.ny)
    }

    fn validate(&self) -> Result<(), CliError> {
        if ![self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite()) {
            return Err(CliError::Invalid("grid bounds must be finite".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(CliError::Invalid(format!("grid needs nx, ny >= 2, got {}x{}", self.nx, self.ny)));
        }
        Ok(())
    }
}

fn axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(format!("expected x0,x1,y0,y1,nx,ny, got {s:?}"));
        }
        let real = |i: usize| parts[i].parse::<f64>().map_err(|e| format!("{:?}: {e}", parts[i]));
        let count = |i: usize| parts[i].parse::<usize>().map_err(|e| format!("{:?}: {e}", parts[i]));
        Ok(Grid { x0: real(0)?, x1: real(1)?, y0: real(2)?, y1: real(3)?, nx: count(4)?, ny: count(5)? })
    }
}

/// Parse a `NAME=VALUE` tolerance override.
pub fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value = value.trim().parse::<f64>().map_err(|e| format!("{value:?}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Psi {
    pub re: f64,
    pub im: f64,
}

/// Everything optional, as read from a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub a1: Option<f64>,
    pub psi: Option<Psi>,
    pub theta: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Config { path: path.to_path_buf(), source })
    }
}

/// Flag values; each one that is set wins over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub a1: Option<f64>,
    pub psi_re: Option<f64>,
    pub psi_im: Option<f64>,
    pub theta: Vec<f64>,
    pub grid: Option<Grid>,
    pub tolerances: Vec<(String, f64)>,
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// A fully resolved run. Serializing it and reading it back as a [`ConfigFile`] reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub a1: f64,
    pub psi: Psi,
    pub theta: Vec<f64>,
    pub grid: Grid,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, flags: Overrides) -> Result<Self, CliError> {
        let a1 = flags.a1.or(file.a1).ok_or_else(|| CliError::Invalid("a1 is required (--a1 or config)".into()))?;
        let psi_re = flags.psi_re.or(file.psi.map(|p| p.re));
        let psi_im = flags.psi_im.or(file.psi.map(|p| p.im)).unwrap_or(0.0);
        let psi_re = psi_re.ok_or_else(|| CliError::Invalid("psi is required (--psi-re or config)".into()))?;
        let theta = if !flags.theta.is_empty() { flags.theta } else { file.theta.filter(|t| !t.is_empty()).unwrap_or_else(|| vec![0.0]) };
        let mut tolerances = file.tolerances.unwrap_or_default();
        tolerances.extend(flags.tolerances);
        let config = RunConfig {
            a1,
            psi: Psi { re: psi_re, im: psi_im },
            theta,
            grid: flags.grid.or(file.grid).unwrap_or_default(),
            tolerances,
            csv: flags.csv.or(file.csv),
            report: flags.report.or(file.report),
            threads: flags.threads.or(file.threads),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.a1.is_finite() && self.a1 > 0.0) {
            return Err(CliError::Invalid(format!("a1 must be a positive number, got {}", self.a1)));
        }
        if !(self.psi.re.is_finite() && self.psi.im.is_finite()) {
            return Err(CliError::Invalid("psi must be finite".into()));
        }
        if let Some(t) = self.theta.iter().find(|t| !t.is_finite()) {
            return Err(CliError::Invalid(format!("theta must be finite, got {t}")));
        }
        self.grid.validate()?;
        for (name, value) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(CliError::Invalid(format!("unknown tolerance {name:?}")));
            }
            if !(value.is_finite() && *value >= 0.0) {
                return Err(CliError::Invalid(format!("tolerance {name} must be >= 0, got {value}")));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::Invalid("threads must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().or_else(|| DEFAULT_TOLERANCES.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)).unwrap_or(0.0)
    }

    pub fn psi(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.psi.re, self.psi.im)
    }
}
