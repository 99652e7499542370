//! Non-Abelian adiabatic holonomies in a laser-driven four-level (tripod) atom.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] small dense complex matrices, exponentials and norms;
//! * [`tripod`] pulse schedules, mixing angles, the atom-laser Hamiltonian,
//!   its dark/bright eigenframe and the analytic dark-subspace connection;
//! * [`holonomy`] path-ordered transport of a matrix-valued connection along
//!   sampled parameter paths, loop composition and the population-difference
//!   observable;
//! * [`schrodinger`] fixed-step RK4 integration of the full four-level
//!   dynamics with instantaneous frame populations;
//! * [`nqr`] the spin-3/2 quadrupole system whose fixed-polar-angle loops
//!   only ever produce commuting holonomies.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the companion CLI
//! crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod nqr;
pub mod schrodinger;
pub mod tripod;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, StateVector};
