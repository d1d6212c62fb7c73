//! Gaussian-state simulation and closed-form sensitivity analysis of
//! classical, squeezed and entangled fiber-optic gyroscopes.

pub mod analytic;
pub mod designs;
pub mod error;
pub mod gaussian;
pub mod optimizer;
pub mod sagnac;

pub use designs::{CircuitResult, DesignConfig, DesignRegistry, FogDesign, Variant};
pub use error::{FogError, Result};
pub use gaussian::{GaussianState, HomodyneResult, Quadrature, SymplecticTransform};
pub use sagnac::{GyroGeometry, Squeezing};
