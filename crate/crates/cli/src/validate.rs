//! Collects every problem with a configuration before anything is computed.

use serde::Serialize;
use unruh_core::unruh::{
    epsilon_of, omega_over_a_for_epsilon, required_truncation, DEFAULT_TRUNCATION_TOLERANCE,
};

use crate::config::RunConfig;
use crate::sweep::{grid, SweepParameter};

pub const SCENARIOS: [&str; 4] = ["single", "double", "epr", "signal"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_truncation: Option<u32>,
    /// Smallest ω/a allowed by `epsilon_max`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_omega_over_a: Option<f64>,
}

impl Diagnostic {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            field: field.into(),
            message: message.into(),
            required_truncation: None,
            threshold_omega_over_a: None,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)?;
        if let Some(n) = self.required_truncation {
            write!(f, " (required truncation {n})")?;
        }
        if let Some(w) = self.threshold_omega_over_a {
            write!(f, " (omega/a must be at least {w})")?;
        }
        Ok(())
    }
}

/// All violations in `config`, including those at every sweep grid point.
pub fn validate(config: &RunConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_common(config, &mut out);
    if !SCENARIOS.contains(&config.scenario.as_str()) {
        out.push(Diagnostic::new(
            "scenario",
            format!(
                "unknown scenario {:?}; expected one of {}",
                config.scenario,
                SCENARIOS.join(", ")
            ),
        ));
        return out;
    }
    match sweep_points(config, &mut out) {
        Some(points) => {
            for point in &points {
                check_point(point, &mut out);
            }
        }
        None => check_point(config, &mut out),
    }
    dedup(out)
}

fn dedup(diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = Vec::with_capacity(diags.len());
    for d in diags {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

fn check_common(config: &RunConfig, out: &mut Vec<Diagnostic>) {
    if !(config.epsilon_max > 0.0 && config.epsilon_max < 1.0) {
        out.push(Diagnostic::new(
            "epsilon_max",
            "must lie strictly between 0 and 1",
        ));
    }
    if !(config.prune_threshold >= 0.0 && config.prune_threshold < 1e-6) {
        out.push(Diagnostic::new("prune_threshold", "must be in [0, 1e-6)"));
    }
    if config.truncation == 0 {
        out.push(Diagnostic::new("truncation", "must be at least 1"));
    }
}

fn sweep_points(config: &RunConfig, out: &mut Vec<Diagnostic>) -> Option<Vec<RunConfig>> {
    let name = config.sweep_parameter.as_deref()?;
    let parameter = match name.parse::<SweepParameter>() {
        Ok(p) => p,
        Err(e) => {
            out.push(Diagnostic::new("sweep_parameter", e));
            return Some(Vec::new());
        }
    };
    let mut missing = false;
    for (field, present) in [
        ("sweep_start", config.sweep_start.is_some()),
        ("sweep_stop", config.sweep_stop.is_some()),
        ("sweep_steps", config.sweep_steps.is_some()),
    ] {
        if !present {
            out.push(Diagnostic::new(field, "required for a sweep"));
            missing = true;
        }
    }
    if missing {
        return Some(Vec::new());
    }
    match grid(config, parameter) {
        Ok(points) => Some(points.into_iter().map(|(_, c)| c).collect()),
        Err(msg) => {
            out.push(Diagnostic::new("sweep_parameter", msg));
            Some(Vec::new())
        }
    }
}

fn require<T>(
    value: Option<T>,
    field: &str,
    scenario: &str,
    out: &mut Vec<Diagnostic>,
) -> Option<T> {
    if value.is_none() {
        out.push(Diagnostic::new(
            field,
            format!("required by the {scenario} scenario"),
        ));
    }
    value
}

/// ε of one frequency, or a diagnostic.
fn check_frequency(
    field: &str,
    omega: f64,
    config: &RunConfig,
    out: &mut Vec<Diagnostic>,
) -> Option<f64> {
    let eps = match epsilon_of(omega) {
        Ok(e) => e,
        Err(_) => {
            out.push(Diagnostic::new(field, "must be a positive finite number"));
            return None;
        }
    };
    if eps > config.epsilon_max {
        out.push(Diagnostic {
            threshold_omega_over_a: Some(omega_over_a_for_epsilon(config.epsilon_max)),
            ..Diagnostic::new(
                field,
                format!("epsilon {eps} exceeds epsilon_max {}", config.epsilon_max),
            )
        });
        return None;
    }
    Some(eps)
}

fn check_margin(field: &str, eps: f64, m: u32, config: &RunConfig, out: &mut Vec<Diagnostic>) {
    let required = required_truncation(eps, m, DEFAULT_TRUNCATION_TOLERANCE);
    if config.truncation < required {
        out.push(Diagnostic {
            required_truncation: Some(required),
            ..Diagnostic::new(
                "truncation",
                format!(
                    "{} is too small for {field} = {m} at epsilon {eps}",
                    config.truncation
                ),
            )
        });
    }
}

fn check_point(config: &RunConfig, out: &mut Vec<Diagnostic>) {
    let scenario = config.scenario.as_str();
    match scenario {
        "single" => {
            let w = require(config.omega1_over_a, "omega1_over_a", scenario, out);
            if config.m.is_none() && config.seed.is_none() {
                out.push(Diagnostic::new(
                    "m",
                    "required by the single scenario unless a seed is given",
                ));
            }
            if let Some(eps) = w.and_then(|w| check_frequency("omega1_over_a", w, config, out)) {
                if let Some(m) = config.m {
                    check_margin("m", eps, m, config, out);
                }
            }
        }
        "double" | "epr" => {
            let w1 = require(config.omega1_over_a, "omega1_over_a", scenario, out);
            let w2 = require(config.omega2_over_a, "omega2_over_a", scenario, out);
            let m1 = require(config.m1, "m1", scenario, out);
            let m2 = require(config.m2, "m2", scenario, out);
            let e1 = w1.and_then(|w| check_frequency("omega1_over_a", w, config, out));
            let e2 = w2.and_then(|w| check_frequency("omega2_over_a", w, config, out));
            if let (Some(e), Some(m)) = (e1, m1) {
                check_margin("m1", e, m, config, out);
            }
            if let (Some(e), Some(m)) = (e2, m2) {
                check_margin("m2", e, m, config, out);
            }
        }
        "signal" => {
            if let Some(w) = require(config.omega0_over_a, "omega0_over_a", scenario, out) {
                check_frequency("omega0_over_a", w, config, out);
            }
        }
        _ => unreachable!("scenario checked by the caller"),
    }
}
