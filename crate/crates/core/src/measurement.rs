//! Projective number measurements: outcome statistics, collapse and
//! renormalization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mode::ModeId;
use crate::state::FockState;
use crate::unruh::AccelerationParams;

/// Probabilities below this are treated as impossible outcomes.
pub const DEFAULT_PROBABILITY_FLOOR: f64 = 1e-30;

/// Name of the generator used by [`sample_outcome`], for run metadata.
pub const SAMPLER_ALGORITHM: &str = "ChaCha8Rng (rand_chacha), seed_from_u64";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementTarget {
    Mode { mode: ModeId, outcome: u32 },
    Total { modes: Vec<ModeId>, outcome: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub target: MeasurementTarget,
    /// Squared norm of the projected component.
    pub probability: f64,
    /// Projected component, renormalized.
    pub collapsed: FockState,
}

/// Geometric number statistics P(m) = (1−ε²) ε^{2m} of one Rindler mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalDistribution {
    boltzmann: f64,
}

impl ThermalDistribution {
    pub fn probability(&self, m: u32) -> f64 {
        (1.0 - self.boltzmann) * self.boltzmann.powf(f64::from(m))
    }

    /// P(0), …, P(m_max).
    pub fn probabilities(&self, m_max: u32) -> Vec<f64> {
        (0..=m_max).map(|m| self.probability(m)).collect()
    }

    /// P(n > m_max) = ε^{2(m_max+1)}.
    pub fn tail(&self, m_max: u32) -> f64 {
        self.boltzmann.powf(f64::from(m_max) + 1.0)
    }
}

pub fn thermal_outcome_distribution(params: &AccelerationParams) -> ThermalDistribution {
    ThermalDistribution {
        boltzmann: params.boltzmann(),
    }
}

/// Probability that independent number measurements on several frequencies
/// return the given counts.
pub fn joint_thermal_probability(outcomes: &[(AccelerationParams, u32)]) -> f64 {
    outcomes
        .iter()
        .map(|(p, m)| thermal_outcome_distribution(p).probability(*m))
        .product()
}

fn collapse(target: MeasurementTarget, kept: FockState, floor: f64) -> Result<MeasurementRecord> {
    let probability = kept.norm_sqr();
    if probability.is_nan() || probability < floor {
        let underflow = kept.support_len() > 0;
        return Err(Error::ZeroProbability {
            message: if underflow {
                format!("outcome {target:?} underflows the probability floor {floor:e}")
            } else {
                format!("outcome {target:?} has no support in the state")
            },
            probability,
            underflow,
        });
    }
    Ok(MeasurementRecord {
        target,
        probability,
        collapsed: kept.normalize()?,
    })
}

/// Projects onto occupation `m` of `mode`.
pub fn project_number(state: &FockState, mode: &ModeId, m: u32) -> Result<MeasurementRecord> {
    project_number_with_floor(state, mode, m, DEFAULT_PROBABILITY_FLOOR)
}

pub fn project_number_with_floor(
    state: &FockState,
    mode: &ModeId,
    m: u32,
    floor: f64,
) -> Result<MeasurementRecord> {
    let idx = state.mode_index(mode)?;
    if m > state.truncation() {
        return Err(Error::config(format!(
            "outcome {m} exceeds the truncation {}",
            state.truncation()
        )));
    }
    let kept = state.filter(|k| k[idx] == m);
    collapse(
        MeasurementTarget::Mode {
            mode: *mode,
            outcome: m,
        },
        kept,
        floor,
    )
}

/// Projects onto total occupation `n_total` summed over `modes`.
pub fn project_total_number(
    state: &FockState,
    modes: &[ModeId],
    n_total: u32,
) -> Result<MeasurementRecord> {
    project_total_number_with_floor(state, modes, n_total, DEFAULT_PROBABILITY_FLOOR)
}

pub fn project_total_number_with_floor(
    state: &FockState,
    modes: &[ModeId],
    n_total: u32,
    floor: f64,
) -> Result<MeasurementRecord> {
    let idx: Vec<usize> = modes
        .iter()
        .map(|m| state.mode_index(m))
        .collect::<Result<_>>()?;
    let kept = state.filter(|k| idx.iter().map(|&i| k[i]).sum::<u32>() == n_total);
    collapse(
        MeasurementTarget::Total {
            modes: modes.to_vec(),
            outcome: n_total,
        },
        kept,
        floor,
    )
}

/// Marginal outcome probabilities of `mode`, indexed by occupation.
pub fn outcome_probabilities(state: &FockState, mode: &ModeId) -> Result<Vec<f64>> {
    let idx = state.mode_index(mode)?;
    let mut p = vec![0.0; state.truncation() as usize + 1];
    for (k, a) in state.amplitudes() {
        p[k[idx] as usize] += a.norm_sqr();
    }
    Ok(p)
}

/// Draws a Born-rule outcome for `mode` with a seeded generator and collapses.
pub fn sample_outcome(
    state: &FockState,
    mode: &ModeId,
    seed: u64,
) -> Result<(u32, MeasurementRecord)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_outcome_with(state, mode, &mut rng)
}

/// As [`sample_outcome`] but continuing an existing generator stream.
pub fn sample_outcome_with<R: Rng>(
    state: &FockState,
    mode: &ModeId,
    rng: &mut R,
) -> Result<(u32, MeasurementRecord)> {
    let p = outcome_probabilities(state, mode)?;
    let total: f64 = p.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain("cannot sample from a zero state"));
    }
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut outcome = None;
    for (m, &pm) in p.iter().enumerate() {
        if pm <= 0.0 {
            continue;
        }
        acc += pm;
        outcome = Some(m as u32);
        if u < acc {
            break;
        }
    }
    let m = outcome.expect("non-zero state has a populated outcome");
    let rec = project_number_with_floor(state, mode, m, 0.0)?;
    Ok((
        m,
        MeasurementRecord {
            probability: rec.probability / total,
            ..rec
        },
    ))
}
