//! Polarization-qubit simulator for Faraday-mirror reflection.
//!
//! A Faraday rotator pass followed by a plain mirror and the return pass
//! acts on the polarization qubit as `iσ₁`. The crate builds that identity
//! from SU(2) primitives, simulates the heralded six-state bench and the
//! entanglement-assisted process tomography, and checks round-trip
//! compensation of reciprocal birefringence.

pub mod bench;
pub mod compensation;
pub mod elements;
pub mod error;
pub mod io;
pub mod spin;
pub mod tomography;

pub use error::{Error, Result};
