//! Reference data ingestion: RCP emissions and concentrations, CMIP5
//! temperature envelopes, pulse-response envelopes and two-layer model
//! parameters.

mod geoffroy;
mod inputs;
mod series;
mod units;

pub use geoffroy::{geoffroy_params, load_geoffroy_table, GEOFFROY_MODELS};
pub use inputs::{DataDir, RcpId, ScenarioInputs, DATA_DIR_ENV};
pub use series::{load_series, parse_series, BenchmarkSeries, Envelope, Unit};
pub use units::{
    co2_forcing_series, concentration_to_mass, mass_to_concentration, GTC_PER_PPM, RCP_BASE_PPM, RCP_F2X,
};

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading reference data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{name}: line {line}: {msg}")]
    Parse { name: String, line: u64, msg: String },
    #[error("{0}: no data rows")]
    Empty(String),
    #[error("{name}: years must be strictly increasing (at {year})")]
    NonMonotone { name: String, year: i32 },
    #[error("{name}: expected unit `{expected}`, found `{found}`")]
    UnitMismatch { name: String, expected: String, found: String },
    #[error("{0}: missing `# unit:` comment line")]
    MissingUnit(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("{name}: envelope lower bound exceeds upper bound at {year}")]
    EnvelopeInverted { name: String, year: i32 },
    #[error("{name}: covers {first}-{last}, need {from}-{to}")]
    Coverage {
        name: String,
        first: i32,
        last: i32,
        from: i32,
        to: i32,
    },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Climate(#[from] crate::climate::ClimateError),
}
