//! Numerical model of photon-number measurements made by a uniformly
//! accelerated observer on the inertial vacuum, in truncated Fock space.
//!
//! Bob (accelerated) counts photons in Rindler modes; the collapsed state is
//! carried to the inertial frame by the Bogoliubov map, where Alice sees real,
//! entangled photons. Every closed-form state is cross-checked against a
//! direct operator-algebra transport.

pub mod entanglement;
pub mod error;
pub mod measurement;
pub mod mode;
pub mod operator;
pub mod protocols;
pub mod state;
pub mod unruh;

pub use entanglement::{
    concurrence_two_qubit, density_matrix, partial_transpose, ppt_report, DensityMatrix,
    EntanglementReport, Partition, Side,
};
pub use error::{Error, Result};
pub use measurement::{project_number, project_total_number, MeasurementRecord};
pub use mode::{Branch, Frame, ModeId};
pub use operator::{Ladder, LadderOp, OperatorPolynomial};
pub use protocols::{
    energy_proxy, epr_postselect, signal_qubit, signal_transmission, single_frequency,
    two_frequency, ProtocolResult, ProtocolSettings, Scenario,
};
pub use state::{FockState, Occupation};
pub use unruh::{AccelerationParams, Normalization, Sector, TransportSettings};

/// Library version, as recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
