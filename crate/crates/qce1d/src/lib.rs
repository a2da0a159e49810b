//! First-order quantum cluster expansion for 1D few-body systems with
//! contact interactions.
//!
//! The library evaluates canonical partition functions, smooth spectral
//! counting functions and densities of states, equations of state and
//! compressibilities for N identical (or multi-species) particles in 1D
//! under homogeneous confinement, keeping quantum statistics exact and
//! treating the contact interaction through a single two-body cluster
//! amplitude. Strong coupling is reached through a fermionized expansion
//! and an energy-shift interpolation; condensation effects through a split
//! of the two lowest many-body states. Every production formula is paired
//! with an independent brute-force oracle in [`oracles`].
//!
//! Units: hbar^2/2m = 1 for the reference mass; energies are inverse
//! lengths squared, temperatures enter through beta.

pub mod clusters;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod oracles;
pub mod partition;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod thermo;

pub use error::{QceError, Result};
pub use model::{Confinement, Interaction, Species, Statistics, SystemSpec, ThermalPoint};

/// Library version stamp written into CLI output headers and cache keys.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
