//! Dirac one-particle space, number-truncated fermionic Fock space and CAR operators.

mod fock;
mod space;

pub use fock::{AntilinearFockOperator, FermionFockSpace, Occupation};
pub use space::{AntilinearOperator, OneParticleOperator, OneParticleSpace, OneParticleVector, Sector};
