//! Run records and their JSON / CSV renderings.

use serde::Serialize;
use unruh_core::protocols::ProtocolResult;
use unruh_core::unruh::Normalization;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::sweep::SweepParameter;

/// Version of `schema/run_record.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

pub const CSV_HEADER: [&str; 8] = [
    "param",
    "value",
    "probability",
    "concurrence",
    "negativity",
    "entropy_bits",
    "energy_proxy",
    "truncation_loss",
];

/// Speed of light in m/s, for converting SI inputs to ω/a.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// ω/a = 2π f c / a for a frequency in Hz and an acceleration in m/s².
pub fn omega_over_a_from_si(frequency_hz: f64, acceleration_m_s2: f64) -> f64 {
    2.0 * std::f64::consts::PI * frequency_hz * SPEED_OF_LIGHT / acceleration_m_s2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiFrequency {
    pub field: String,
    pub frequency_hz: f64,
    pub omega_over_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiConversion {
    pub acceleration_m_s2: f64,
    pub frequencies: Vec<SiFrequency>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub parameter: SweepParameter,
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub library_version: &'static str,
    pub schema_version: &'static str,
    pub normalization: Normalization,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_conversion: Option<SiConversion>,
    /// Only present with `--timing`, so that plain runs stay byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub result: ProtocolResult,
    pub meta: Meta,
}

impl RunRecord {
    /// JSON value of the record; the two state dumps are dropped unless
    /// `full_states`.
    pub fn to_json(&self, full_states: bool) -> Result<serde_json::Value, CliError> {
        let mut v = serde_json::to_value(self).map_err(|e| CliError::Encode(e.to_string()))?;
        if !full_states {
            if let Some(result) = v.get_mut("result").and_then(|r| r.as_object_mut()) {
                result.remove("state_oracle");
                result.remove("state_analytic");
            }
        }
        Ok(v)
    }

    pub fn summary(&self) -> SummaryRow {
        let r = &self.result;
        let report = r.primary_report();
        let sweep = self.meta.sweep.as_ref();
        SummaryRow {
            param: sweep.map(|s| s.parameter.name()).unwrap_or(""),
            value: sweep.map(|s| s.value),
            probability: r
                .two_qubit
                .as_ref()
                .map(|q| q.unconditional_probability)
                .unwrap_or(r.outcome_probability),
            concurrence: r.two_qubit.as_ref().map(|q| q.concurrence),
            negativity: report.map(|e| e.negativity),
            entropy_bits: report.and_then(|e| e.entropy_bits),
            energy_proxy: r.energy_proxy,
            truncation_loss: r.truncation_loss,
        }
    }
}

/// One CSV line; empty cells for quantities a scenario does not define.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub param: &'static str,
    pub value: Option<f64>,
    pub probability: f64,
    pub concurrence: Option<f64>,
    pub negativity: Option<f64>,
    pub entropy_bits: Option<f64>,
    pub energy_proxy: f64,
    pub truncation_loss: f64,
}

/// Pretty JSON: one object for a single record, an array for a sweep.
pub fn render_json(
    records: &[RunRecord],
    sweep: bool,
    full_states: bool,
) -> Result<String, CliError> {
    let values = records
        .iter()
        .map(|r| r.to_json(full_states))
        .collect::<Result<Vec<_>, _>>()?;
    let out = if sweep {
        serde_json::to_string_pretty(&values)
    } else {
        serde_json::to_string_pretty(&values[0])
    };
    let mut s = out.map_err(|e| CliError::Encode(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render_csv(records: &[RunRecord]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let encode = |e: csv::Error| CliError::Encode(e.to_string());
    w.write_record(CSV_HEADER).map_err(encode)?;
    for r in records {
        w.serialize(r.summary()).map_err(encode)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}
