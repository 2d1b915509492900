use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use unruh_cli::record::{omega_over_a_from_si, SiConversion, SiFrequency};
use unruh_cli::run::{destination, render, write_output, OUTPUT_DIR_ENV};
use unruh_cli::{execute, validate, CliError, Overrides, RunConfig, RunOptions, SCHEMA_VERSION};

/// Photon-number measurements by an accelerated observer, seen from the
/// inertial frame.
#[derive(Debug, Parser)]
#[command(name = "unruh", disable_version_flag = true)]
struct Cli {
    /// Print library and schema versions.
    #[arg(short = 'V', long, action = ArgAction::SetTrue)]
    version: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a TOML config; flags override its keys.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Report every problem with a config without running it.
    Validate {
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        si: SiInputs,
    },
    /// Bob counts photons at one frequency.
    Single(#[command(flatten)] Common),
    /// Bob counts photons at two frequencies.
    Double(#[command(flatten)] Common),
    /// Two frequencies, then post-selection on one inertial photon pair.
    Epr(#[command(flatten)] Common),
    /// Bob sends one photon to Alice.
    Signal(#[command(flatten)] Common),
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    overrides: Overrides,
    #[command(flatten)]
    si: SiInputs,
    /// Worker threads for sweeps.
    #[arg(long, short = 'j')]
    jobs: Option<usize>,
    /// Include state amplitudes in sweep JSON records.
    #[arg(long)]
    full_states: bool,
    /// Record wall-clock duration (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Directory for relative or missing output paths.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
}

/// Frequencies in Hz at an acceleration in m/s², converted to ω/a.
#[derive(Debug, Args, Default)]
struct SiInputs {
    /// Proper acceleration in m/s^2, enables the Hz inputs
    #[arg(long, value_name = "M_PER_S2")]
    acceleration_si: Option<f64>,
    /// First frequency in Hz
    #[arg(long, value_name = "HZ", requires = "acceleration_si")]
    frequency1_hz: Option<f64>,
    /// Second frequency in Hz
    #[arg(long, value_name = "HZ", requires = "acceleration_si")]
    frequency2_hz: Option<f64>,
    /// Signal frequency in Hz
    #[arg(long, value_name = "HZ", requires = "acceleration_si")]
    frequency0_hz: Option<f64>,
}

impl SiInputs {
    fn apply(&self, config: &mut RunConfig) -> Option<SiConversion> {
        let a = self.acceleration_si?;
        let mut frequencies = Vec::new();
        for (field, hz, slot) in [
            (
                "omega1_over_a",
                self.frequency1_hz,
                &mut config.omega1_over_a,
            ),
            (
                "omega2_over_a",
                self.frequency2_hz,
                &mut config.omega2_over_a,
            ),
            (
                "omega0_over_a",
                self.frequency0_hz,
                &mut config.omega0_over_a,
            ),
        ] {
            if let Some(hz) = hz {
                let w = omega_over_a_from_si(hz, a);
                *slot = Some(w);
                frequencies.push(SiFrequency {
                    field: field.into(),
                    frequency_hz: hz,
                    omega_over_a: w,
                });
            }
        }
        Some(SiConversion {
            acceleration_m_s2: a,
            frequencies,
        })
    }
}

fn build_config(
    file: Option<&PathBuf>,
    scenario: Option<&str>,
    overrides: &Overrides,
    si: &SiInputs,
) -> Result<(RunConfig, Option<SiConversion>), CliError> {
    let mut config = match file {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::new(scenario.unwrap_or_default()),
    };
    config.apply(overrides);
    let conversion = si.apply(&mut config);
    Ok((config, conversion))
}

fn run(file: Option<&PathBuf>, scenario: Option<&str>, common: &Common) -> Result<(), CliError> {
    let (config, si_conversion) = build_config(file, scenario, &common.overrides, &common.si)?;
    let options = RunOptions {
        jobs: common.jobs,
        full_states: common.full_states,
        timing: common.timing,
        si_conversion,
    };
    let emitted = execute(&config, &options)?;
    let text = render(&emitted, config.format(), &options)?;
    match destination(&config, common.output_dir.as_deref()) {
        Some(path) => {
            write_output(&path, &text)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })?;
        }
    }
    Ok(())
}

fn report(err: &CliError) {
    match err {
        CliError::Invalid(diags) => {
            for d in diags {
                eprintln!("error: {d}");
            }
        }
        CliError::Core(unruh_core::Error::Precision {
            message,
            required_truncation: Some(n),
        }) => eprintln!("error: {message}; rerun with --truncation {n} or larger"),
        e => eprintln!("error: {e}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.version {
        println!(
            "unruh {} (record schema {SCHEMA_VERSION})",
            unruh_core::VERSION
        );
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(1);
    };
    let outcome = match &command {
        Command::Run { config, common } => run(Some(config), None, common),
        Command::Single(c) => run(None, Some("single"), c),
        Command::Double(c) => run(None, Some("double"), c),
        Command::Epr(c) => run(None, Some("epr"), c),
        Command::Signal(c) => run(None, Some("signal"), c),
        Command::Validate {
            config,
            overrides,
            si,
        } => build_config(config.as_ref(), None, overrides, si).and_then(|(c, _)| {
            let diags = validate(&c);
            if diags.is_empty() {
                println!("ok");
                Ok(())
            } else {
                Err(CliError::Invalid(diags))
            }
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
