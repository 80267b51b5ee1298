//! Momentum-space Hamiltonian with an ultraviolet cutoff on h₊ ⊗ 𝓕_s.

mod demo;
mod momentum;
mod pair;
mod scan;
mod system;

pub use demo::{momentum_transfer_demo, DemoParams, DemoReport};
pub use momentum::{gaussian_packet, ContinuityReport, CutoffFunction, MomentumGrid, MuChoice};
pub use pair::{fourier2, one_electron_consistency, pair_oracle_residual, smeared_two_fermion_mu, two_fermion_mu, w_sym};
pub use scan::{max_radius, ols, shell_integral, uv_divergence_scan, LinearFit, ScanReport};
pub use system::{hmu_scalar, ActionReport, DensityCommutator, HamiltonianTerms, OneFermionBosonSpace};
