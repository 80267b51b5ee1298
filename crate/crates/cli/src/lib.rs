//! Config-driven verification runs for the twisted-field lattice model.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use record::CheckRecord;
