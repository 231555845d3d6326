//! Declarative experiment configuration.
//!
//! Every run-* and sweep flag can also come from a single TOML file passed
//! with `--config`; explicit flags win over file values. Documented keys:
//!
//! ```toml
//! # experiment.toml — all keys optional
//! n = 11697            # copies
//! t = 9709             # threshold; default ceil(0.83 n)
//! gamma = 0.01         # quantum noise level
//! channel = "outcome-coin"   # or "depolarize-memory"
//! strategy = "prefix-leak:8" # classical runs and sweeps
//! trials = 1000
//! seed = 7
//! json = "report.json" # machine-readable output path
//! # sweep axes
//! n_values = [1000, 10000]
//! gamma_values = [0.0, 0.01, 0.02]
//! t_fractions = [0.83]
//! strategies = ["quantum", "constant-zero"]
//! out = "sweep.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<u32>,
    pub t: Option<u32>,
    pub gamma: Option<f64>,
    pub channel: Option<String>,
    pub strategy: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub json: Option<PathBuf>,
    pub n_values: Option<Vec<u32>>,
    pub gamma_values: Option<Vec<f64>>,
    pub t_fractions: Option<Vec<f64>>,
    pub strategies: Option<Vec<String>>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| anyhow::anyhow!("reading {}: {e}", p.display()))?;
                Ok(toml::from_str(&text)?)
            }
        }
    }
}

/// Flag value if given, else file value, else the default.
pub fn resolve<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
