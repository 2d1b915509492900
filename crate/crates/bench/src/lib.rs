//! Shared fixtures for the transport benchmarks.

use unruh_core::unruh::{omega_over_a_for_epsilon, AccelerationParams, Sector};

/// (m, ε) points the benchmarks sweep.
pub const GRID: [(u32, f64); 4] = [(0, 0.5), (2, 0.5), (4, 0.5), (4, 0.7)];

pub fn sector(epsilon: f64) -> Sector {
    Sector::new(
        0,
        AccelerationParams::new(omega_over_a_for_epsilon(epsilon)).expect("valid ε"),
    )
}
