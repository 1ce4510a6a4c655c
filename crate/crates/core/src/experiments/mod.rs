//! Configuration, sweeps and validation entry points.

pub mod config;
pub mod selftest;
pub mod sweep;
pub mod validate;

pub use config::{load_config, ScenarioConfig};
pub use selftest::selftest;
pub use sweep::{run_sweep, SweepSpec, SweepSummary, SweepVariable};
pub use validate::{validate, ValidateOptions, ValidationReport};
