use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};

/// Observer whose mode decomposition a label refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Uniformly accelerated observer (wedge modes ψ^I, ψ^II).
    Rindler,
    /// Inertial observer (one-photon states Ψ, Ψ′).
    Minkowski,
}

/// Which of the two partner modes at a given frequency.
///
/// In the Rindler frame `I` and `II` are the wedge modes; in the Minkowski
/// frame `I` is Ψ_ω (built on ψ^I) and `II` is its partner Ψ′_ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    I,
    II,
}

impl Branch {
    pub fn partner(self) -> Branch {
        match self {
            Branch::I => Branch::II,
            Branch::II => Branch::I,
        }
    }
}

/// Label of a single field mode.
///
/// `slot` distinguishes wavepackets that share a frequency value, so that two
/// measured frequencies may be numerically equal while remaining distinct modes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeId {
    pub frame: Frame,
    pub branch: Branch,
    pub slot: u16,
    omega_over_a: f64,
}

impl ModeId {
    pub fn new(frame: Frame, branch: Branch, slot: u16, omega_over_a: f64) -> Result<Self> {
        if !(omega_over_a.is_finite() && omega_over_a > 0.0) {
            return Err(Error::domain(format!(
                "mode frequency must be a positive finite ω/a, got {omega_over_a}"
            )));
        }
        Ok(ModeId {
            frame,
            branch,
            slot,
            omega_over_a,
        })
    }

    pub fn rindler(branch: Branch, slot: u16, omega_over_a: f64) -> Result<Self> {
        Self::new(Frame::Rindler, branch, slot, omega_over_a)
    }

    pub fn minkowski(branch: Branch, slot: u16, omega_over_a: f64) -> Result<Self> {
        Self::new(Frame::Minkowski, branch, slot, omega_over_a)
    }

    pub fn omega_over_a(&self) -> f64 {
        self.omega_over_a
    }

    /// Same slot and frequency, other branch.
    pub fn partner(&self) -> ModeId {
        ModeId {
            branch: self.branch.partner(),
            ..*self
        }
    }

    /// Same slot, branch and frequency seen from another frame.
    pub fn in_frame(&self, frame: Frame) -> ModeId {
        ModeId { frame, ..*self }
    }

    fn key(&self) -> (Frame, Branch, u16, u64) {
        (
            self.frame,
            self.branch,
            self.slot,
            self.omega_over_a.to_bits(),
        )
    }
}

impl PartialEq for ModeId {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for ModeId {}

impl Hash for ModeId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for ModeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// frequencies are positive, so the IEEE bit pattern orders like the value
impl Ord for ModeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.frame, self.branch) {
            (Frame::Rindler, Branch::I) => "psi_I",
            (Frame::Rindler, Branch::II) => "psi_II",
            (Frame::Minkowski, Branch::I) => "Psi",
            (Frame::Minkowski, Branch::II) => "Psi'",
        };
        write!(f, "{name}[{}](w/a={})", self.slot, self.omega_over_a)
    }
}

/// Rejects registries containing the same mode twice.
pub(crate) fn check_registry(modes: &[ModeId]) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::config("mode registry must not be empty"));
    }
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(Error::config(format!("duplicate mode {m} in registry")));
        }
    }
    Ok(())
}
