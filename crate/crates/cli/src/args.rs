use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::parse::{parse_angle, parse_angle_triple, parse_triple};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_FIT_TOL: f64 = 1e-9;
pub const DEFAULT_STEPS: usize = 99;
pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_NOGO_FLOOR: f64 = 0.05;
pub const DEFAULT_COMMUTING_TOL: f64 = 1e-8;
pub const DEFAULT_COVARIANCE_UNITARIES: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "obsclone", version, about = "Cloning machines for classes of qubit observables")]
pub struct Cli {
    /// JSON file with default values; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the machine catalog.
    List(ListArgs),
    /// Fit added noises and check unitary covariance of a machine.
    Verify(VerifyArgs),
    /// Tabulate the measured uncertainty product over a grid of angles.
    Sweep(SweepArgs),
    /// Multi-start search for a perfect cloner of a noncommuting class.
    Nogo(NogoArgs),
    /// Compare the observable cloner with the universal state cloner.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Catalog name (see `list`).
    #[arg(long)]
    pub machine: Option<String>,
    /// Operating angle in radians; `pi/4` style shortcuts are accepted.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Number of input states for the noise fit (at least 4).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance on fit residuals and on |g_fit - g_predicted|.
    #[arg(long)]
    pub tol: Option<f64>,
    /// ZYZ Euler angles of V for the `conjugated` machine (default: seeded Haar-random V).
    #[arg(long, value_parser = parse_angle_triple, allow_hyphen_values = true)]
    pub euler: Option<[f64; 3]>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Catalog name of a machine family with an angle (default `nc`).
    #[arg(long)]
    pub machine: Option<String>,
    /// Single angle instead of a grid.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Inclusive lower end of the grid, inside (0, pi/2).
    #[arg(long, value_parser = parse_angle)]
    pub theta_min: Option<f64>,
    /// Inclusive upper end of the grid, inside (0, pi/2).
    #[arg(long, value_parser = parse_angle)]
    pub theta_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Input Bloch vector `x,y,z`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub bloch: Option<[f64; 3]>,
    /// Number of input states for each noise fit.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance on fit residuals.
    #[arg(long)]
    pub tol: Option<f64>,
    /// ZYZ Euler angles of V for the `conjugated` machine.
    #[arg(long, value_parser = parse_angle_triple, allow_hyphen_values = true)]
    pub euler: Option<[f64; 3]>,
}

#[derive(Debug, Args)]
pub struct NogoArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of optimizer restarts.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Exit 0 only if the best residual exceeds this floor.
    #[arg(long)]
    pub floor: Option<f64>,
    /// Search the commuting class {x*s3} instead; exit 0 only if the
    /// residual falls to `--tol` or below.
    #[arg(long)]
    pub commuting: bool,
    /// Residual threshold for `--commuting`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Simplex iterations per restart.
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Minimum-uncertainty input Bloch vector `x,y,z` (default `0,0,1`).
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub bloch: Option<[f64; 3]>,
}

/// Values accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub machine: Option<String>,
    pub theta: Option<AngleValue>,
    pub theta_min: Option<AngleValue>,
    pub theta_max: Option<AngleValue>,
    pub steps: Option<usize>,
    pub bloch: Option<[f64; 3]>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub restarts: Option<usize>,
    pub floor: Option<f64>,
    pub max_iterations: Option<usize>,
    pub euler: Option<[AngleValue; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Number(f64),
    Text(String),
}

impl AngleValue {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            AngleValue::Number(x) => Ok(*x),
            AngleValue::Text(s) => parse_angle(s),
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn angle(field: &Option<AngleValue>) -> Result<Option<f64>, String> {
        field.as_ref().map(AngleValue::radians).transpose()
    }

    pub fn euler_angles(&self) -> Result<Option<[f64; 3]>, String> {
        match &self.euler {
            None => Ok(None),
            Some([a, b, c]) => Ok(Some([a.radians()?, b.radians()?, c.radians()?])),
        }
    }
}
