//! Dispatches configurations to the scenario drivers and writes the output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use unruh_core::measurement::SAMPLER_ALGORITHM;
use unruh_core::protocols::{
    epr_postselect, signal_transmission, single_frequency, single_frequency_sampled, two_frequency,
    ProtocolResult, ProtocolSettings,
};
use unruh_core::unruh::TransportSettings;

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::record::{
    render_csv, render_json, Meta, RunRecord, SiConversion, SweepPoint, SCHEMA_VERSION,
};
use crate::sweep::{grid, SweepParameter};
use crate::validate::validate;

/// Directory used for relative or missing output paths.
pub const OUTPUT_DIR_ENV: &str = "UNRUH_OUTPUT_DIR";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads for sweeps; `None` uses all cores.
    pub jobs: Option<usize>,
    pub full_states: bool,
    pub timing: bool,
    pub si_conversion: Option<SiConversion>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub records: Vec<RunRecord>,
    pub sweep: bool,
}

pub fn protocol_settings(config: &RunConfig) -> ProtocolSettings {
    ProtocolSettings {
        transport: TransportSettings {
            epsilon_max: config.epsilon_max,
            prune_threshold: config.prune_threshold,
            ..TransportSettings::default()
        },
        ..ProtocolSettings::default()
    }
}

/// Runs one grid point (or a plain single config).
pub fn run_point(config: &RunConfig) -> Result<ProtocolResult, unruh_core::Error> {
    let s = protocol_settings(config);
    let n = config.truncation;
    let need = |v: Option<f64>, f: &str| {
        v.ok_or_else(|| unruh_core::Error::Configuration(format!("{f} is required")))
    };
    let count = |v: Option<u32>, f: &str| {
        v.ok_or_else(|| unruh_core::Error::Configuration(format!("{f} is required")))
    };
    match config.scenario.as_str() {
        "single" => {
            let w = need(config.omega1_over_a, "omega1_over_a")?;
            match (config.m, config.seed) {
                (Some(m), _) => single_frequency(w, m, n, &s),
                (None, Some(seed)) => single_frequency_sampled(w, seed, n, &s),
                (None, None) => Err(unruh_core::Error::Configuration(
                    "m or seed is required".into(),
                )),
            }
        }
        "double" => two_frequency(
            need(config.omega1_over_a, "omega1_over_a")?,
            need(config.omega2_over_a, "omega2_over_a")?,
            count(config.m1, "m1")?,
            count(config.m2, "m2")?,
            n,
            &s,
        ),
        "epr" => epr_postselect(
            need(config.omega1_over_a, "omega1_over_a")?,
            need(config.omega2_over_a, "omega2_over_a")?,
            count(config.m1, "m1")?,
            count(config.m2, "m2")?,
            n,
            &s,
        ),
        "signal" => signal_transmission(need(config.omega0_over_a, "omega0_over_a")?, &s),
        other => Err(unruh_core::Error::Configuration(format!(
            "unknown scenario {other:?}"
        ))),
    }
}

fn record(
    config: &RunConfig,
    sweep: Option<SweepPoint>,
    options: &RunOptions,
) -> Result<RunRecord, CliError> {
    let start = Instant::now();
    let result = run_point(config).map_err(|e| match (&sweep, e) {
        (Some(p), unruh_core::Error::Configuration(m)) => unruh_core::Error::Configuration(
            format!("at {} = {}: {m}", p.parameter.name(), p.value),
        ),
        (_, e) => e,
    })?;
    let elapsed = start.elapsed().as_secs_f64();
    let settings = protocol_settings(config);
    Ok(RunRecord {
        config: config.clone(),
        meta: Meta {
            library_version: unruh_core::VERSION,
            schema_version: SCHEMA_VERSION,
            normalization: settings.transport.normalization,
            sampler: (config.m.is_none() && config.seed.is_some()).then_some(SAMPLER_ALGORITHM),
            sweep,
            si_conversion: options.si_conversion.clone(),
            duration_seconds: options.timing.then_some(elapsed),
        },
        result,
    })
}

/// Validates, then runs a single config or every sweep point. Sweep points
/// run in parallel; records come back in grid order. A failing point fails
/// the whole sweep with the error of the first failing index.
pub fn execute(config: &RunConfig, options: &RunOptions) -> Result<Emitted, CliError> {
    let diagnostics = validate(config);
    if !diagnostics.is_empty() {
        return Err(CliError::Invalid(diagnostics));
    }
    let Some(name) = config.sweep_parameter.as_deref() else {
        return Ok(Emitted {
            records: vec![record(config, None, options)?],
            sweep: false,
        });
    };
    let parameter: SweepParameter = name.parse().map_err(CliError::Config)?;
    let points = grid(config, parameter).map_err(CliError::Config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = options.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<Result<RunRecord, CliError>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(index, (value, c))| {
                record(
                    c,
                    Some(SweepPoint {
                        parameter,
                        index,
                        value: *value,
                    }),
                    options,
                )
            })
            .collect()
    });
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Emitted {
        records,
        sweep: true,
    })
}

pub fn render(
    emitted: &Emitted,
    format: OutputFormat,
    options: &RunOptions,
) -> Result<String, CliError> {
    match format {
        // single runs always carry their states
        OutputFormat::Json => render_json(
            &emitted.records,
            emitted.sweep,
            options.full_states || !emitted.sweep,
        ),
        OutputFormat::Csv => render_csv(&emitted.records),
    }
}

/// Where output goes: the configured path (relative paths resolved against
/// `output_dir`), a default file name inside `output_dir`, or stdout (`None`).
pub fn destination(config: &RunConfig, output_dir: Option<&Path>) -> Option<PathBuf> {
    let ext = match config.format() {
        OutputFormat::Json => "json",
        OutputFormat::Csv => "csv",
    };
    match (&config.output_path, output_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            let kind = if config.is_sweep() { "sweep" } else { "run" };
            Some(dir.join(format!("unruh-{}-{kind}.{ext}", config.scenario)))
        }
        (None, None) => None,
    }
}

pub fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use unruh_core::unruh::omega_over_a_for_epsilon;

    #[test]
    fn single_run_renders_deterministically() {
        let c = RunConfig {
            omega1_over_a: Some(omega_over_a_for_epsilon(0.5)),
            m: Some(1),
            truncation: 20,
            ..RunConfig::new("single")
        };
        let o = RunOptions::default();
        let a = render(&execute(&c, &o).unwrap(), OutputFormat::Json, &o).unwrap();
        let b = render(&execute(&c, &o).unwrap(), OutputFormat::Json, &o).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"state_oracle\""));
        assert!(!a.contains("duration_seconds"));
    }

    #[test]
    fn invalid_config_exits_one() {
        let e = execute(&RunConfig::new("double"), &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn precision_failure_exits_three() {
        let c = RunConfig {
            omega1_over_a: Some(omega_over_a_for_epsilon(0.7)),
            seed: Some(3),
            truncation: 3,
            ..RunConfig::new("single")
        };
        let e = execute(&c, &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3, "{e}");
    }

    #[test]
    fn impossible_post_selection_exits_two() {
        let root = omega_over_a_for_epsilon(0.5f64.sqrt());
        let c = RunConfig {
            omega1_over_a: Some(root),
            omega2_over_a: Some(root),
            m1: Some(1),
            m2: Some(1),
            ..RunConfig::new("epr")
        };
        let e = execute(&c, &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
    }

    #[test]
    fn sweep_keeps_grid_order_across_jobs() {
        let c = RunConfig {
            omega1_over_a: Some(omega_over_a_for_epsilon(0.5)),
            m1: Some(0),
            m2: Some(0),
            sweep_parameter: Some("omega_ratio".into()),
            sweep_start: Some(1.001),
            sweep_stop: Some(1.5),
            sweep_steps: Some(6),
            ..RunConfig::new("epr")
        };
        let one = RunOptions {
            jobs: Some(1),
            ..RunOptions::default()
        };
        let many = RunOptions {
            jobs: Some(4),
            ..RunOptions::default()
        };
        let a = render(&execute(&c, &one).unwrap(), OutputFormat::Csv, &one).unwrap();
        let b = render(&execute(&c, &many).unwrap(), OutputFormat::Csv, &many).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("param,value,probability,concurrence,negativity,entropy_bits,energy_proxy,truncation_loss\n"));
        assert_eq!(a.lines().count(), 7);
    }

    #[test]
    fn destination_rules() {
        let mut c = RunConfig::new("epr");
        assert_eq!(destination(&c, None), None);
        let dir = Path::new("/tmp/out");
        assert_eq!(
            destination(&c, Some(dir)),
            Some(dir.join("unruh-epr-run.json"))
        );
        c.output_path = Some("x.csv".into());
        assert_eq!(destination(&c, Some(dir)), Some(dir.join("x.csv")));
        c.output_path = Some("/abs/x.csv".into());
        assert_eq!(
            destination(&c, Some(dir)),
            Some(PathBuf::from("/abs/x.csv"))
        );
    }
}
