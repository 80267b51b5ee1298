//! Transverse photons in the Coulomb gauge: P_tr, η_tr, 𝐀, 𝐀̇, E^λ and div E^λ.

mod system;
mod transverse;
mod vector;

pub use system::CoulombSystem;
pub use transverse::TransverseSector;
pub use vector::{divergence, eta_tr, gradient, laplacian, transverse_projector, VectorTestFunction};
