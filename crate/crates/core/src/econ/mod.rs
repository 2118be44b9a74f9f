//! Exogenous drivers, production, damages, abatement, utility and discounting.

mod exogenous;
mod params;
mod production;

pub use exogenous::{
    abatement_coeff, carbon_intensity, exogenous_forcing, growth_labor, labor, land_emissions, tfp, ExogenousPath,
    FexMode,
};
pub use params::{DamageForm, EconParams, EconPreset, EconVintage, ExogenousParams, UtilityScale, HOWARD_STERNER_PSI2};
pub use production::{
    abatement_cost, damages, damages_slope, discount_factor, gross_output, net_output_share, period_utility, step_economy,
    utility_argument, Controls, EconState, EconStep,
};

use thiserror::Error;

/// Errors raised by the economy model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EconError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("consumption must be positive, got {0}")]
    NonPositiveConsumption(f64),
    #[error("capital must be positive, got {0}")]
    NonPositiveCapital(f64),
    #[error("control `{name}` = {value} outside [0, 1]")]
    ControlOutOfBounds { name: &'static str, value: f64 },
    #[error("proportional non-CO2 forcing needs the CO2 forcing as input")]
    MissingCo2Forcing,
    #[error("period {t} beyond the {len}-period exogenous path")]
    PeriodOutOfRange { t: usize, len: usize },
}
