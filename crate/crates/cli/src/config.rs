//! Flat JSON run configurations. Unknown keys are rejected and every
//! randomized routine takes an explicit seed.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use csgauge_core::xsb::System;
use csgauge_core::Grid2D;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Rk4,
    Picard,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub system: System,
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub mass: f64,
    #[serde(default = "rk4")]
    pub scheme: SchemeName,
    #[serde(default = "eight")]
    pub picard_window: usize,
    #[serde(default = "four")]
    pub picard_iterations: usize,
    pub seed: u64,
    pub amplitude: f64,
    #[serde(default = "four_i")]
    pub kmax: i64,
    /// Constant value of `a_0`.
    #[serde(default)]
    pub background: f64,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default = "one")]
    pub sample_every: usize,
    #[serde(default = "yes")]
    pub snapshots: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilityConfig {
    pub system: System,
    pub s_min: f64,
    pub s_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub resolution: usize,
    pub eps0: f64,
    /// `(s, b)` points that get a full condition report.
    #[serde(default)]
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullformsConfig {
    pub n: usize,
    pub length: f64,
    pub kmax: i64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "ten_thousand")]
    pub probe_samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsConfig {
    /// Snapshots at consecutive times, read as one space-time field.
    pub snapshots: Vec<PathBuf>,
    pub dt: f64,
    pub s: Vec<f64>,
    pub b: Vec<f64>,
}

fn rk4() -> SchemeName {
    SchemeName::Rk4
}
fn eight() -> usize {
    8
}
fn four() -> usize {
    4
}
fn four_i() -> i64 {
    4
}
fn one() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn ten_thousand() -> usize {
    10_000
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn require(ok: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}

impl SimulateConfig {
    pub fn validate(&self) -> Result<Grid2D, CliError> {
        let grid = Grid2D::square(self.n, self.length).map_err(|e| CliError::Config(e.to_string()))?;
        require(self.dt > 0.0 && self.dt.is_finite(), "dt must be positive")?;
        require(self.t_final > 0.0 && self.t_final.is_finite(), "t_final must be positive")?;
        require(self.mass >= 0.0 && self.mass.is_finite(), "mass must be >= 0")?;
        require(self.system == System::Csd || self.mass == 0.0, "mass applies to csd only")?;
        require(self.amplitude >= 0.0 && self.amplitude.is_finite(), "amplitude must be >= 0")?;
        require(self.kmax >= 1, "kmax must be >= 1")?;
        require(self.background.is_finite(), "background must be finite")?;
        require(self.sample_every >= 1, "sample_every must be >= 1")?;
        Ok(grid)
    }
}

impl FeasibilityConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        require(self.s_min <= self.s_max && self.b_min <= self.b_max, "empty scan range")?;
        require(self.resolution >= 64, "resolution must be >= 64")?;
        require(self.eps0 > 0.0, "eps0 must be positive")
    }
}

impl NullformsConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        require(self.trials >= 1, "trials must be >= 1")?;
        require(self.kmax >= 1 && 2 * self.kmax < self.n as i64, "need 1 <= kmax < n/2")
    }
}

impl NormsConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        require(!self.snapshots.is_empty(), "no snapshots given")?;
        require(self.dt > 0.0, "dt must be positive")
    }
}
