//! Transfer-matrix eigen diagnostics, energy-balance response timescales and
//! carbon-cycle refitting.

mod ebm;
mod eigen;
mod fit;

pub use ebm::{ebm_timescales, EbmTimescales};
pub use eigen::{carbon_eigen, numeric_eigenvalues, CarbonEigen};
pub use fit::{fit_carbon, FitBounds, FitContext, FitOptions, FitReport, FitTargets};

use thiserror::Error;

use crate::climate::ClimateError;
use crate::scenarios::ScenarioError;

/// Errors raised by the diagnostics and the fitter.
#[derive(Debug, Error)]
pub enum CalibrateError {
    #[error(transparent)]
    Climate(#[from] ClimateError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("eigenvalues are complex (discriminant {0})")]
    ComplexEigenvalues(f64),
    #[error("numeric eigen-solver disagrees with the closed form by {0}")]
    EigenMismatch(f64),
    #[error("infeasible bounds for `{name}`: [{lower}, {upper}] with start {start}")]
    InfeasibleBounds {
        name: &'static str,
        lower: f64,
        upper: f64,
        start: f64,
    },
    #[error("objective is not finite at the starting point")]
    NonFiniteObjective,
    #[error("cannot write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}
