//! Climate benchmark protocols and the pre-industrial spin-up.

mod history;
mod idealized;
mod pulse;
mod table;

pub use history::{
    linear_exogenous_forcing, rcp_run, spin_up_1850, step_average, ForcingMode, RcpMode, RcpResult, SpinUp,
    PRESENT_YEAR, START_YEAR,
};
pub use idealized::{abrupt_4xco2, ramp_1pct, AbruptResult, RampResult, RAMP_BASE_PPM};
pub use pulse::{pulse_100gtc, PulseResult};
pub use table::ResultTable;

use thiserror::Error;

use crate::climate::ClimateError;
use crate::drivers::DataError;

/// Errors raised by the benchmark protocols.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Climate(#[from] ClimateError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("target {target} ppm never reached (last {last:.1} ppm in {year})")]
    TargetNotReached { target: f64, last: f64, year: i32 },
    #[error("control emissions diverged at step {step} ({value} GtC/yr)")]
    ControlDiverged { step: usize, value: f64 },
    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}
