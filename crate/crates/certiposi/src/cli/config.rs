//! Run configuration, read from TOML and overridden by flags.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Lattice points per edge for the plateau error check; overrides `plateau_points`.
    pub points_per_dim: Option<u32>,
    pub plateau_points: usize,
    pub feasibility_points: usize,
    /// Lattice points for G* and for the certificate-derived constant.
    pub loja_points: usize,
    pub loja_samples: usize,
    pub loja_cloud: usize,
    pub rays_per_dim: usize,
    pub ball_samples: usize,
    pub fstar_samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points_per_dim: None,
            plateau_points: 10_000,
            feasibility_points: 2000,
            loja_points: 100_000,
            loja_samples: 400,
            loja_cloud: 5000,
            rays_per_dim: 64,
            ball_samples: 20_000,
            fstar_samples: 4000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tau_act: f64,
    pub residual: f64,
    /// Slack for the sampled inequalities of a distance report.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tau_act: 1e-7, residual: 1e-8, verify: 1e-8 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub certificate: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub worst_case: bool,
    pub estimate_fstar: bool,
    pub max_coefficients: usize,
    pub output: Outputs,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            worst_case: false,
            estimate_fstar: false,
            max_coefficients: 2_000_000,
            output: Outputs::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [("tau_act", t.tau_act), ("residual", t.residual), ("verify", t.verify)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("tolerance {name} = {v} must be positive")));
            }
        }
        if self.grid.points_per_dim == Some(0) || self.grid.plateau_points == 0 || self.grid.loja_points == 0 {
            return Err(Error::InvalidInput("grid densities must be positive".into()));
        }
        Ok(())
    }
}
