use std::path::Path;

use billiard_core::oval::{CurveFamily, OvalSpec, MIN_RESOLUTION};
use billiard_core::verify::Tolerances;
use billiard_core::{Oval, SurfaceKind};
use serde::Deserialize;

use crate::error::CliError;

const DEFAULT_RESOLUTION: usize = billiard_core::oval::DEFAULT_RESOLUTION;

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

/// Contents of the `--config` file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceKind,
    pub curve: CurveFamily,
    #[serde(default)]
    pub center: Option<[f64; 3]>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Seeds every random choice a command makes.
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.resolution < MIN_RESOLUTION {
            return Err(CliError::Config(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {}",
                cfg.resolution
            )));
        }
        cfg.tolerances
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn spec(&self) -> OvalSpec {
        OvalSpec {
            surface: self.surface,
            curve: self.curve.clone(),
            center: self.center,
        }
    }

    /// Builds the oval; a curve that is not an oval is a configuration error.
    pub fn oval(&self) -> Result<Oval, CliError> {
        Oval::build(&self.spec(), self.resolution).map_err(|e| CliError::Config(e.to_string()))
    }
}
