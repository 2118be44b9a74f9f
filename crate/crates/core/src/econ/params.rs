use serde::{Deserialize, Serialize};

use super::EconError;
use crate::Scalar;

/// Quadratic damage coefficient of the Howard–Sterner variant.
pub const HOWARD_STERNER_PSI2: f64 = 0.007438;

/// How damages reduce output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DamageForm {
    /// `Y = Yg (1 - Ω)(1 - Λ)` with `Ω = 1 - 1/(1 + ψ1 T + ψ2 T²)`.
    Multiplicative2007,
    /// `Y = Yg (1 - Λ - Ω)` with `Ω = ψ1 T + ψ2 T²`.
    Subtractive2016,
}

/// Consumption argument of the period utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UtilityScale {
    /// `C / L`.
    PerCapita2007,
    /// `C / (1000 L)`.
    PerCapitaThousands2016,
}

/// Functional-form family of the exogenous laws and output normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EconVintage {
    /// Labor in millions inside the production function.
    Dice2007,
    /// Labor in billions inside the production function.
    Dice2016,
}

/// Economy constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconParams<S = f64> {
    /// Capital depreciation per year.
    pub delta_k: S,
    /// Capital elasticity of output.
    pub alpha: S,
    /// Linear damage coefficient, 1/K.
    pub psi1: S,
    /// Quadratic damage coefficient, 1/K².
    pub psi2: S,
    /// Exponent of the abatement cost function.
    pub theta2: S,
    /// Intertemporal elasticity of substitution.
    pub ies: S,
    /// Pure rate of time preference per year.
    pub rho: S,
    /// Years per period.
    pub t_step: S,
    pub damage_form: DamageForm,
    pub utility_scale: UtilityScale,
}

impl<S: Scalar> EconParams<S> {
    pub fn validate(&self) -> Result<(), EconError> {
        let bad = |name, reason: &str| {
            Err(EconError::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if !(self.alpha > S::zero() && self.alpha < S::one()) {
            return bad("alpha", "must lie in (0, 1)");
        }
        if !(self.delta_k > S::zero() && self.delta_k < S::one()) {
            return bad("delta_k", "must lie in (0, 1)");
        }
        if !(self.rho > S::zero()) {
            return bad("rho", "must be positive");
        }
        if !(self.theta2 > S::one()) {
            return bad("theta2", "must exceed 1");
        }
        if !(self.psi2 >= S::zero()) || !(self.psi1 >= S::zero()) {
            return bad("psi", "damage coefficients must be nonnegative");
        }
        if !(self.ies > S::zero()) {
            return bad("ies", "must be positive");
        }
        if !(self.t_step >= S::one()) {
            return bad("t_step", "must be at least one year");
        }
        Ok(())
    }
}

/// Constants of the exogenous laws of motion. Rates are per year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExogenousParams<S = f64> {
    pub vintage: EconVintage,
    /// Years per period.
    pub t_step: S,
    /// Initial population, millions.
    pub labor0: S,
    /// Asymptotic population, millions.
    pub labor_inf: S,
    /// Convergence rate of population.
    pub labor_rate: S,
    /// Initial total factor productivity.
    pub tfp0: S,
    /// Initial TFP growth rate.
    pub tfp_growth0: S,
    /// Decline rate of TFP growth.
    pub tfp_decline: S,
    /// Initial carbon intensity, 1000 GtC per trillion USD.
    pub sigma0: S,
    /// Initial growth of carbon intensity.
    pub sigma_growth0: S,
    /// Decline rate of decarbonization.
    pub sigma_decline: S,
    /// Initial backstop price.
    pub backstop_price0: S,
    /// Decline rate of the backstop price.
    pub backstop_decline: S,
    /// Carbon to CO2 mass ratio.
    pub c2co2: S,
    /// Initial land-use emissions, 1000 GtC per year.
    pub land0: S,
    /// Decline rate of land-use emissions.
    pub land_decline: S,
    /// Initial non-CO2 forcing, W/m².
    pub fex0: S,
    /// Non-CO2 forcing reached at the end of the ramp, W/m².
    pub fex1: S,
    /// Length of the non-CO2 forcing ramp in years.
    pub fex_ramp_years: S,
}

/// Economy calibration paired with its initial capital.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconPreset<S = f64> {
    pub params: EconParams<S>,
    pub exo: ExogenousParams<S>,
    /// Initial capital, trillions USD.
    pub k0: S,
}

impl<S: Scalar> EconPreset<S> {
    /// DICE-2016 economy at a period length of `t_step` years.
    pub fn dice2016(t_step: S) -> Self {
        let l = S::lit;
        Self {
            params: EconParams {
                delta_k: l(0.1),
                alpha: l(0.3),
                psi1: l(0.0),
                psi2: l(0.00236),
                theta2: l(2.6),
                ies: l(0.67),
                rho: l(0.015),
                t_step,
                damage_form: DamageForm::Subtractive2016,
                utility_scale: UtilityScale::PerCapitaThousands2016,
            },
            exo: ExogenousParams {
                vintage: EconVintage::Dice2016,
                t_step,
                labor0: l(7403.0),
                labor_inf: l(11500.0),
                labor_rate: l(0.0268),
                tfp0: l(5.115),
                tfp_growth0: l(0.0152),
                tfp_decline: l(0.005),
                sigma0: l(0.00009556),
                sigma_growth0: l(-0.0152),
                sigma_decline: l(0.001),
                backstop_price0: l(0.55),
                backstop_decline: l(0.005),
                c2co2: l(3.666),
                land0: l(0.000709),
                land_decline: l(0.023),
                fex0: l(0.5),
                fex1: l(1.0),
                fex_ramp_years: l(85.0),
            },
            k0: l(223.0),
        }
    }

    /// DICE-2007 economy at a period length of `t_step` years.
    pub fn dice2007(t_step: S) -> Self {
        let l = S::lit;
        Self {
            params: EconParams {
                delta_k: l(0.1),
                alpha: l(0.3),
                psi1: l(0.0),
                psi2: l(0.0028388),
                theta2: l(2.8),
                ies: l(0.5),
                rho: l(0.015),
                t_step,
                damage_form: DamageForm::Multiplicative2007,
                utility_scale: UtilityScale::PerCapita2007,
            },
            exo: ExogenousParams {
                vintage: EconVintage::Dice2007,
                t_step,
                labor0: l(6514.0),
                labor_inf: l(8600.0),
                labor_rate: l(0.035),
                tfp0: l(0.02722),
                tfp_growth0: l(0.0092),
                tfp_decline: l(0.001),
                sigma0: l(0.00013418),
                sigma_growth0: l(-0.0073),
                sigma_decline: l(0.003),
                backstop_price0: l(0.585),
                backstop_decline: l(0.005),
                c2co2: l(3.666),
                land0: l(0.0011),
                land_decline: l(0.01),
                fex0: l(-0.06),
                fex1: l(0.3),
                fex_ramp_years: l(100.0),
            },
            k0: l(137.0),
        }
    }

    /// Switches to the Howard–Sterner quadratic damage coefficient.
    pub fn with_howard_sterner(mut self) -> Self {
        self.params.psi1 = S::zero();
        self.params.psi2 = S::lit(HOWARD_STERNER_PSI2);
        self
    }
}
