//! Information geometry of minimum-entropy-production probability paths
//! generated by resonantly driven two-level quantum systems.
//!
//! - [`dynamics`]: su(2) propagator, fields, rotating frame, overlaps.
//! - [`scenarios`]: the constant, oscillatory, power-law and exponential drives.
//! - [`info_geometry`]: Fisher information, metric, length and divergence.
//! - [`geodesics`]: optimum paths, entropic speed, rate and efficiency.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod error;
pub mod geodesics;
pub mod info_geometry;
pub mod profile;
pub mod quadrature;
pub mod scenarios;
pub mod units;

pub use error::{Error, Result};
pub use info_geometry::{FisherFunction, Normalization};
pub use profile::{FieldProfile, ProfileKind};
pub use scenarios::{Peak, Probabilities, ProbabilityPath, Scenario};
pub use units::PhysicalConstants;
