//! Twisted fixed-time field models on finite periodic lattices.

pub mod bose;
pub mod composite;
pub mod coulomb;
pub mod error;
pub mod fermi;
pub mod hamiltonian;
pub mod lattice;
pub mod sparse;
pub mod twisted;

pub use error::{Error, Result};
pub use num_complex::Complex64;
