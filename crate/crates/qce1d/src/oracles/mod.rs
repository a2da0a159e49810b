//! Independent brute-force reference implementations.
//!
//! Everything in this module is deliberately decoupled from the production
//! formulas it validates: the amplitude oracle integrates the raw
//! three-dimensional representation, the spectrum oracles diagonalize or
//! solve Bethe equations, and the transform oracles work on the Laplace
//! level. They are slower than the production paths and live in the test and
//! comparison tier.

mod amplitude;
mod bethe;
mod laplace;
mod levels;
mod two_body;

pub use amplitude::amplitude_quadrature;
pub use bethe::{
    bethe_solve, ground_quantum_numbers, lieb_liniger_ground_planewave, lieb_liniger_levels,
    lieb_liniger_lowest_two, BetheLowestTwo,
};
pub use laplace::{
    a_term_complex, erfcx_complex, numeric_inverse_laplace, numeric_laplace,
};
pub use levels::{
    canonical_ideal_recursion, canonical_ln_partition_from_levels,
    canonical_partition_from_levels, harmonic_single_particle_levels, LevelList, Provenance,
};
pub use two_body::{relative_even_levels, two_body_harmonic_levels};
