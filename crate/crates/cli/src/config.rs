//! Run configuration: defaults, then a TOML file, then command-line flags.

use std::path::Path;

use serde::Deserialize;
use whap_core::operator::{DEFAULT_SEED, IDENTITY_THRESHOLD};
use whap_core::{GridSpec, MeanMotionConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Half-length `T` of the window `[-T, T)`.
    pub grid_t: f64,
    /// Number of grid points, a power of two.
    pub grid_n: usize,
    /// Pass threshold for identity residuals.
    pub threshold: f64,
    /// Horizon for mean-motion estimates.
    pub horizon: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_t: 200.0,
            grid_n: 1 << 14,
            threshold: IDENTITY_THRESHOLD,
            horizon: MeanMotionConfig::default().horizon,
            seed: DEFAULT_SEED,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid_t: Option<f64>,
    pub grid_n: Option<usize>,
    pub threshold: Option<f64>,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = flags.grid_t {
            cfg.grid_t = v;
        }
        if let Some(v) = flags.grid_n {
            cfg.grid_n = v;
        }
        if let Some(v) = flags.threshold {
            cfg.threshold = v;
        }
        if let Some(v) = flags.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = flags.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.threshold) {
            return Err(CliError::Config("threshold must be positive".into()));
        }
        if !positive(self.horizon) {
            return Err(CliError::Config("horizon must be positive".into()));
        }
        self.grid()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec, CliError> {
        GridSpec::new(self.grid_t, self.grid_n).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn mean_motion(&self) -> MeanMotionConfig {
        MeanMotionConfig {
            horizon: self.horizon,
            ..MeanMotionConfig::default()
        }
    }
}
