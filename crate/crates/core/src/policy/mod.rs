//! Business-as-usual and optimal mitigation paths, social cost of carbon and
//! carbon taxes.
//!
//! The infinite-horizon planner problem is truncated to a decision horizon
//! followed by a continuation block that holds the last controls fixed. The
//! objective is evaluated by forward simulation, its gradient by a hand-written
//! adjoint pass, and the box-constrained problem is solved with a projected
//! limited-memory BFGS method.

mod model;
mod problem;
mod solver;
mod sweep;
mod trajectory;

pub use model::{evaluate, Evaluation};
pub use problem::{ControlBounds, DamageChoice, PolicyConfig, PolicyProblem, Scenario, TerminalValue, TON_C_PER_TON_CO2};
pub use solver::{minimize_box, solve, solve_bau, solve_from, solve_optimal, BoxMinimum, Solution, SolverOptions};
pub use sweep::{grid, sweep, SweepCell, SweepRow};
pub use trajectory::{Trajectory, BACKSTOP_MU};

use thiserror::Error;

use crate::climate::ClimateError;
use crate::econ::EconError;

/// Errors raised by the policy layer.
#[derive(Debug, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Climate(#[from] ClimateError),
    #[error(transparent)]
    Econ(#[from] EconError),
    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("solver stopped after {iterations} iterations with KKT residual {residual:.3e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("controls produce an infeasible path: {0}")]
    Infeasible(String),
    #[error("social cost of carbon requested on an unconverged trajectory")]
    Unconverged,
    #[error("cannot write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}
