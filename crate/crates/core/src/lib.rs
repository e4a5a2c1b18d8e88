//! Direct and inverse scattering for the half-line Schroedinger operator
//! -u'' + q(x) u = k^2 u, u(0) = 0.
//!
//! The crate computes scattering and spectral data from a sampled potential
//! and reconstructs the potential from data by three independent routes
//! (Marchenko, Gel'fand-Levitan, Krein), plus fixed-energy phase-shift
//! analysis and recovery of confining potentials from bound-state data.
//!
//! Everything is a pure function of its inputs and tables are immutable
//! after construction, so evaluation over k- or x-grid partitions can be
//! mapped in parallel by callers.

pub mod airy;
pub mod error;
pub mod gelfand_levitan;
pub mod grid;
pub mod krein;
pub mod linalg;
pub mod marchenko;
pub mod fixed_energy;
pub mod forward;
pub mod quad;
pub mod quarkonium;
pub mod riemann;
pub mod types;
pub mod validate;
pub mod winding;

pub use error::{Error, Result};
