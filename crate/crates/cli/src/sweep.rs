//! One-dimensional parameter grids over a base configuration.

use std::str::FromStr;

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Omega1OverA,
    Omega2OverA,
    Omega0OverA,
    /// ω₂/ω₁ at fixed ω₁.
    OmegaRatio,
    M,
    M1,
    M2,
    Truncation,
}

impl SweepParameter {
    pub const NAMES: [&'static str; 8] = [
        "omega1_over_a",
        "omega2_over_a",
        "omega0_over_a",
        "omega_ratio",
        "m",
        "m1",
        "m2",
        "truncation",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    fn is_integer(self) -> bool {
        matches!(
            self,
            SweepParameter::M
                | SweepParameter::M1
                | SweepParameter::M2
                | SweepParameter::Truncation
        )
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use SweepParameter::*;
        let all = [
            Omega1OverA,
            Omega2OverA,
            Omega0OverA,
            OmegaRatio,
            M,
            M1,
            M2,
            Truncation,
        ];
        all.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            format!(
                "unknown sweep parameter {s:?}; expected one of {}",
                Self::NAMES.join(", ")
            )
        })
    }
}

/// `steps` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: u32) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / f64::from(steps - 1);
            (0..steps)
                .map(|i| {
                    if i == steps - 1 {
                        stop
                    } else {
                        start + h * f64::from(i)
                    }
                })
                .collect()
        }
    }
}

/// Expands a sweep config into (value, single-point config) pairs in grid order.
pub fn grid(
    config: &RunConfig,
    parameter: SweepParameter,
) -> Result<Vec<(f64, RunConfig)>, String> {
    let (Some(start), Some(stop), Some(steps)) =
        (config.sweep_start, config.sweep_stop, config.sweep_steps)
    else {
        return Err("a sweep needs sweep_start, sweep_stop and sweep_steps".into());
    };
    if steps == 0 {
        return Err("sweep_steps must be at least 1".into());
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err("sweep bounds must be finite".into());
    }
    if parameter == SweepParameter::OmegaRatio && config.omega1_over_a.is_none() {
        return Err("sweeping omega_ratio needs omega1_over_a".into());
    }
    let mut base = config.clone();
    base.sweep_parameter = None;
    base.sweep_start = None;
    base.sweep_stop = None;
    base.sweep_steps = None;
    base.output_path = None;
    base.output_format = None;
    linspace(start, stop, steps)
        .into_iter()
        .map(|v| {
            let mut c = base.clone();
            let count = || -> Result<u32, String> {
                if parameter.is_integer()
                    && (v < 0.0 || (v - v.round()).abs() > 1e-9 || v > f64::from(u32::MAX))
                {
                    return Err(format!(
                        "{} takes non-negative integers, grid has {v}",
                        parameter.name()
                    ));
                }
                Ok(v.round() as u32)
            };
            match parameter {
                SweepParameter::Omega1OverA => c.omega1_over_a = Some(v),
                SweepParameter::Omega2OverA => c.omega2_over_a = Some(v),
                SweepParameter::Omega0OverA => c.omega0_over_a = Some(v),
                SweepParameter::OmegaRatio => c.omega2_over_a = c.omega1_over_a.map(|w| w * v),
                SweepParameter::M => c.m = Some(count()?),
                SweepParameter::M1 => c.m1 = Some(count()?),
                SweepParameter::M2 => c.m2 = Some(count()?),
                SweepParameter::Truncation => c.truncation = count()?,
            }
            Ok((v, c))
        })
        .collect()
}
