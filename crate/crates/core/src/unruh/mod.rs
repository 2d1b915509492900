//! Unruh sector states and the frame map V between the accelerated and
//! inertial Fock spaces.
//!
//! Each measured frequency is handled as an independent two-mode sector.
//! Unmeasured frequencies map back to the inertial vacuum and are never
//! represented.

mod coefficients;
mod params;
mod spectral;
mod transport;

pub use coefficients::{
    analytic_required_truncation, k_coefficient, k_coefficient_or_zero, sector_coefficients,
};
pub use params::{
    epsilon_of, omega_over_a_for_epsilon, required_truncation, AccelerationParams, Normalization,
    Sector, TransportSettings, DEFAULT_EPSILON_MAX, DEFAULT_LOSS_BUDGET,
    DEFAULT_TRUNCATION_TOLERANCE,
};
pub use spectral::{spectral_working_cap, transport_diagonal_spectral, transport_thermal_sector};
pub use transport::{
    analytic_sector_state, bogoliubov_image, inertial_image_of_rindler_vacuum, ladder_image,
    sector_tail_bound, transport_measured_sector, transport_series_direct, unruh_sector_state,
};
