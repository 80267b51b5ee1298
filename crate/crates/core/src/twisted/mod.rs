//! 𝓕_a(h) ⊗ 𝓕_s(span): twisted Weyl operators and fields, charged states, m-point functions.

mod charged;
mod covariance;
mod examples;
mod model;
mod npoint;
mod relations;

pub use charged::{ChargedVector, LocalizationReport, StateValue};
pub use examples::{LebesgueReport, QuadratureComparison};
pub use model::{field_multiply, phase_multiply, ModelConfig, TwistedSystem};
pub use npoint::NPointValue;
pub use relations::{masked_dense_norm, GaugeResidual, InfinitesimalResidual};
