//! Campaign configuration files.
//!
//! A configuration is a JSON object, validated in full before any work:
//!
//! ```json
//! {
//!   "experiment": "pairing",
//!   "measure": {"kind": "uniform_circle", "center": [0, 0], "radius": 1},
//!   "n_values": [101],
//!   "xi": {"rule": "fixed", "points": [[1.5, 0]]},
//!   "epsilon": 0.15,
//!   "trials": 100,
//!   "base_seed": 7,
//!   "output_dir": "out",
//!   "plot": true
//! }
//! ```
//!
//! Unknown keys are rejected. A relative `output_dir` is resolved against
//! the directory holding the configuration file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{Campaign, ExperimentKind, KRule, XiRule};
use crate::measure::{Measure, MeasureSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: ExperimentKind,
    pub measure: MeasureSpec,
    pub n_values: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_rule: Option<KRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<XiRule>,
    /// Defaults to the experiment's own ε.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub plot: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Region radius of the concentration sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Net spacing of the concentration sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub net_pitch: Option<f64>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads and parses a configuration; `output_dir` becomes absolute
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if cfg.output_dir.is_relative() {
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    /// The validated campaign described by this configuration.
    pub fn campaign(&self) -> Result<Campaign> {
        let measure = Measure::try_from(&self.measure).map_err(|e| Error::Config(format!("measure: {e}")))?;
        let mut c = Campaign::new(self.experiment, measure);
        c.n_values = self.n_values.clone();
        if let Some(k) = &self.k_rule {
            c.k_rule = k.clone();
        }
        if let Some(xi) = &self.xi {
            c.xi = xi.clone();
        }
        if let Some(eps) = self.epsilon {
            c.epsilon = eps;
        }
        c.trials = self.trials;
        c.base_seed = self.base_seed;
        if let Some(t) = self.success_threshold {
            c.success_threshold = t;
        }
        if let Some(tol) = self.tol {
            c.tol = tol;
        }
        c.m = self.m;
        c.net_pitch = self.net_pitch;
        c.validate()?;
        Ok(c)
    }
}
