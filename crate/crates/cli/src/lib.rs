//! Configuration, validation, execution and output for the `unruh` runner.

pub mod config;
pub mod error;
pub mod record;
pub mod run;
pub mod sweep;
pub mod validate;

pub use config::{OutputFormat, Overrides, RunConfig};
pub use error::CliError;
pub use record::{RunRecord, SCHEMA_VERSION};
pub use run::{execute, render, RunOptions};
pub use validate::{validate, Diagnostic};
