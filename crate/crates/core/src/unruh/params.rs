use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mode::{Branch, Frame, ModeId};
use crate::state::DEFAULT_PRUNE_THRESHOLD;

/// Largest ε = e^{−πω/a} accepted on numerical paths.
pub const DEFAULT_EPSILON_MAX: f64 = 0.9;

/// Tail tolerance used by the truncation-margin rule.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-8;

/// Largest relative weight a transported sector may lose to the cap.
pub const DEFAULT_LOSS_BUDGET: f64 = 1e-2;

/// e^{−π·ω/a}.
pub fn epsilon_of(omega_over_a: f64) -> Result<f64> {
    if omega_over_a.is_nan() || omega_over_a <= 0.0 {
        return Err(Error::domain(format!(
            "ω/a must be positive, got {omega_over_a}"
        )));
    }
    Ok((-PI * omega_over_a).exp())
}

/// Inverse of [`epsilon_of`].
pub fn omega_over_a_for_epsilon(epsilon: f64) -> f64 {
    -epsilon.ln() / PI
}

/// Smallest N with N ≥ m + ⌈ln(tol) / (2 ln ε)⌉.
pub fn required_truncation(epsilon: f64, m: u32, tolerance: f64) -> u32 {
    if epsilon <= 0.0 {
        return m.max(1);
    }
    let margin = (tolerance.ln() / (2.0 * epsilon.ln())).ceil().max(1.0);
    m.saturating_add(margin.min(f64::from(u32::MAX / 2)) as u32)
}

/// Acceleration-dependent constants of one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccelerationParams {
    omega_over_a: f64,
    epsilon: f64,
}

impl AccelerationParams {
    pub fn new(omega_over_a: f64) -> Result<Self> {
        let epsilon = epsilon_of(omega_over_a)?;
        if !omega_over_a.is_finite() {
            return Err(Error::domain("ω/a must be finite"));
        }
        Ok(AccelerationParams {
            omega_over_a,
            epsilon,
        })
    }

    /// Parameters for a given ε ∈ (0, 1); ε is stored exactly as given.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!(
                "ε must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(AccelerationParams {
            omega_over_a: omega_over_a_for_epsilon(epsilon),
            epsilon,
        })
    }

    pub fn omega_over_a(&self) -> f64 {
        self.omega_over_a
    }

    /// ε = e^{−πω/a}.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// ε² = e^{−2πω/a}.
    pub fn boltzmann(&self) -> f64 {
        self.epsilon * self.epsilon
    }

    pub fn check_cap(&self, epsilon_max: f64, tolerance: f64) -> Result<()> {
        if self.epsilon > epsilon_max {
            return Err(Error::Precision {
                message: format!(
                    "ε = {} exceeds the cap {epsilon_max}; ω/a must be at least {}",
                    self.epsilon,
                    omega_over_a_for_epsilon(epsilon_max)
                ),
                required_truncation: Some(required_truncation(self.epsilon, 0, tolerance)),
            });
        }
        Ok(())
    }
}

/// Prefactor convention for the ladder-operator images under V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// √(1−ε²), as the transformation is usually quoted.
    #[default]
    AsPublished,
    /// 1/√(1−ε²), which makes V unitary on the sector.
    Unitary,
}

impl Normalization {
    pub fn prefactor(self, epsilon: f64) -> f64 {
        let s = (1.0 - epsilon * epsilon).sqrt();
        match self {
            Normalization::AsPublished => s,
            Normalization::Unitary => 1.0 / s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportSettings {
    pub epsilon_max: f64,
    pub tolerance: f64,
    pub loss_budget: f64,
    pub normalization: Normalization,
    pub prune_threshold: f64,
}

impl Default for TransportSettings {
    fn default() -> Self {
        TransportSettings {
            epsilon_max: DEFAULT_EPSILON_MAX,
            tolerance: DEFAULT_TRUNCATION_TOLERANCE,
            loss_budget: DEFAULT_LOSS_BUDGET,
            normalization: Normalization::AsPublished,
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
        }
    }
}

/// One frequency: the Rindler pair (ψ^I, ψ^II) and its inertial image (Ψ, Ψ′).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sector {
    pub slot: u16,
    pub params: AccelerationParams,
}

impl Sector {
    pub fn new(slot: u16, params: AccelerationParams) -> Self {
        Sector { slot, params }
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon()
    }

    fn mode(&self, frame: Frame, branch: Branch) -> ModeId {
        ModeId::new(frame, branch, self.slot, self.params.omega_over_a())
            .expect("sector frequency validated on construction")
    }

    /// (ψ^I_ω, ψ^II_ω).
    pub fn rindler_modes(&self) -> [ModeId; 2] {
        [
            self.mode(Frame::Rindler, Branch::I),
            self.mode(Frame::Rindler, Branch::II),
        ]
    }

    /// (Ψ_ω, Ψ′_ω).
    pub fn minkowski_modes(&self) -> [ModeId; 2] {
        [
            self.mode(Frame::Minkowski, Branch::I),
            self.mode(Frame::Minkowski, Branch::II),
        ]
    }
}
