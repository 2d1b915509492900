//! Run configuration: one flat TOML file, overridable key by key from flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unruh_core::state::DEFAULT_PRUNE_THRESHOLD;
use unruh_core::unruh::DEFAULT_EPSILON_MAX;

use crate::error::CliError;

pub const DEFAULT_TRUNCATION: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1_over_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2_over_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_over_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<u32>,
    #[serde(default = "default_truncation")]
    pub truncation: u32,
    #[serde(default = "default_epsilon_max")]
    pub epsilon_max: f64,
    #[serde(default = "default_prune_threshold")]
    pub prune_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_parameter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_steps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_format: Option<OutputFormat>,
}

fn default_truncation() -> u32 {
    DEFAULT_TRUNCATION
}

fn default_epsilon_max() -> f64 {
    DEFAULT_EPSILON_MAX
}

fn default_prune_threshold() -> f64 {
    DEFAULT_PRUNE_THRESHOLD
}

impl RunConfig {
    pub fn new(scenario: impl Into<String>) -> Self {
        RunConfig {
            scenario: scenario.into(),
            omega1_over_a: None,
            omega2_over_a: None,
            omega0_over_a: None,
            m: None,
            m1: None,
            m2: None,
            truncation: DEFAULT_TRUNCATION,
            epsilon_max: DEFAULT_EPSILON_MAX,
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
            seed: None,
            sweep_parameter: None,
            sweep_start: None,
            sweep_stop: None,
            sweep_steps: None,
            output_path: None,
            output_format: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml(&text)
    }

    pub fn is_sweep(&self) -> bool {
        self.sweep_parameter.is_some()
    }

    /// JSON for single runs, CSV for sweeps unless stated otherwise.
    pub fn format(&self) -> OutputFormat {
        self.output_format.unwrap_or(if self.is_sweep() {
            OutputFormat::Csv
        } else {
            OutputFormat::Json
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = Some(v); } )* };
        }
        take!(
            omega1_over_a,
            omega2_over_a,
            omega0_over_a,
            m,
            m1,
            m2,
            seed,
            sweep_parameter,
            sweep_start,
            sweep_stop,
            sweep_steps,
            output_path,
            output_format
        );
        if let Some(s) = &o.scenario {
            self.scenario = s.clone();
        }
        if let Some(n) = o.truncation {
            self.truncation = n;
        }
        if let Some(e) = o.epsilon_max {
            self.epsilon_max = e;
        }
        if let Some(p) = o.prune_threshold {
            self.prune_threshold = p;
        }
    }
}

/// Flag counterparts of every [`RunConfig`] key.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// single, double, epr or signal
    #[arg(long)]
    pub scenario: Option<String>,
    /// First frequency in units of the acceleration
    #[arg(long)]
    pub omega1_over_a: Option<f64>,
    /// Second frequency in units of the acceleration
    #[arg(long)]
    pub omega2_over_a: Option<f64>,
    /// Signal frequency in units of the acceleration
    #[arg(long)]
    pub omega0_over_a: Option<f64>,
    /// Photon count Bob records (single); omit to sample with --seed
    #[arg(long)]
    pub m: Option<u32>,
    /// Count at the first frequency
    #[arg(long)]
    pub m1: Option<u32>,
    /// Count at the second frequency
    #[arg(long)]
    pub m2: Option<u32>,
    /// Per-mode Fock cap N
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Largest e^(-pi omega/a) accepted
    #[arg(long)]
    pub epsilon_max: Option<f64>,
    /// Amplitudes below this are dropped
    #[arg(long)]
    pub prune_threshold: Option<f64>,
    /// Seed for sampled outcomes
    #[arg(long)]
    pub seed: Option<u64>,
    /// Field to sweep, e.g. omega_ratio or m1
    #[arg(long)]
    pub sweep_parameter: Option<String>,
    /// First sweep value
    #[arg(long)]
    pub sweep_start: Option<f64>,
    /// Last sweep value (inclusive)
    #[arg(long)]
    pub sweep_stop: Option<f64>,
    /// Number of sweep points
    #[arg(long)]
    pub sweep_steps: Option<u32>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub output_path: Option<PathBuf>,
    /// json (default) or csv (default for sweeps)
    #[arg(long, value_enum)]
    pub output_format: Option<OutputFormat>,
}
