//! Optional TOML defaults, overridden by command-line flags.
//!
//! ```toml
//! [params]
//! tau_pub = 100
//! tau_dataset = 30
//! alpha = 0.05
//!
//! [grid]
//! alpha_values = [0.05, 0.15]
//! target = "scores"
//! ```

use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub params: ParamConfig,
    pub grid: GridConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamConfig {
    pub tau_pub: Option<f64>,
    pub tau_dataset: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub d: Option<f64>,
    pub d_data: Option<f64>,
    pub d_pub: Option<f64>,
    pub max_iters: Option<usize>,
    pub tolerance: Option<f64>,
    pub normalize_rho: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub tau_pub_values: Option<Vec<f64>>,
    pub tau_dataset_values: Option<Vec<f64>>,
    pub alpha_values: Option<Vec<f64>>,
    pub beta_values: Option<Vec<f64>>,
    pub target: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let c: Config = toml::from_str("[params]\ntau_pub = 100\n[grid]\nalpha_values = [0.05]\n").unwrap();
        assert_eq!(c.params.tau_pub, Some(100.0));
        assert_eq!(c.grid.alpha_values, Some(vec![0.05]));
        assert!(toml::from_str::<Config>("[params]\ntau = 1\n").is_err());
    }
}
