//! Carbon cycle, radiative forcing and two-layer temperature model.

mod carbon;
mod preset;
mod run;
mod temperature;

pub use carbon::{build_transfer_matrix, step_carbon, CarbonMass, CarbonParams, TransferMatrix};
pub use preset::{ClimatePreset, PresetName};
pub use run::{run_climate, ClimateState, Driver, ExogenousForcing};
pub use temperature::{forcing, step_temperature, TempParams, Temperature};

use thiserror::Error;

/// Errors raised by the climate model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClimateError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("transfer matrix entry {entry} is negative ({value})")]
    NegativeTransfer { entry: &'static str, value: f64 },
    #[error("time step {dt} is unstable: {reason}")]
    UnstableStep { dt: f64, reason: &'static str },
    #[error("atmospheric carbon mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("reservoir `{reservoir}` became negative ({value})")]
    NegativeMass { reservoir: &'static str, value: f64 },
    #[error("input path has {got} entries, {needed} required")]
    PathLength { needed: usize, got: usize },
    #[error("preset {preset} is locked to a {native}-year step, requested {requested}")]
    LockedStep {
        preset: String,
        native: u32,
        requested: f64,
    },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}
