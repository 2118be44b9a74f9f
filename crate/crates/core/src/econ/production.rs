use serde::{Deserialize, Serialize};

use super::{DamageForm, EconError, EconParams, EconVintage, ExogenousPath, UtilityScale};
use crate::Scalar;

/// Capital stock at a period index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconState<S = f64> {
    /// Capital, trillions USD.
    pub k: S,
    pub period: usize,
}

/// Abatement fraction `mu` and savings rate `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls<S = f64> {
    pub mu: S,
    pub s: S,
}

/// Outcome of one economy period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconStep<S = f64> {
    pub k_next: S,
    pub y_gross: S,
    /// Output net of damages and abatement.
    pub y_net: S,
    pub damage_frac: S,
    pub abatement_frac: S,
    pub investment: S,
    pub consumption: S,
    /// Industrial emissions, 1000 GtC per year.
    pub emissions_industrial: S,
    /// Industrial plus land-use emissions, 1000 GtC per year.
    pub emissions: S,
}

fn period_check<S: Scalar>(t: usize, exo: &ExogenousPath<S>) -> Result<(), EconError> {
    if t >= exo.len() {
        return Err(EconError::PeriodOutOfRange { t, len: exo.len() });
    }
    Ok(())
}

/// Gross output in trillions USD.
///
/// Labor enters in millions for the 2007 vintage and in billions for 2016.
pub fn gross_output<S: Scalar>(k: S, t: usize, params: &EconParams<S>, exo: &ExogenousPath<S>) -> Result<S, EconError> {
    period_check(t, exo)?;
    if !(k > S::zero()) {
        return Err(EconError::NonPositiveCapital(k.to_f64().unwrap_or(f64::NAN)));
    }
    let workers = match exo.params.vintage {
        EconVintage::Dice2007 => exo.labor[t],
        EconVintage::Dice2016 => exo.labor[t] / S::lit(1000.0),
    };
    Ok(exo.tfp[t] * workers.powf(S::one() - params.alpha) * k.powf(params.alpha))
}

/// Damages as a fraction of gross output.
pub fn damages<S: Scalar>(t_at: S, params: &EconParams<S>) -> S {
    let poly = params.psi1 * t_at + params.psi2 * t_at * t_at;
    match params.damage_form {
        DamageForm::Subtractive2016 => poly,
        DamageForm::Multiplicative2007 => S::one() - S::one() / (S::one() + poly),
    }
}

/// Derivative of [`damages`] with respect to temperature.
pub fn damages_slope<S: Scalar>(t_at: S, params: &EconParams<S>) -> S {
    let two = S::lit(2.0);
    let dpoly = params.psi1 + two * params.psi2 * t_at;
    match params.damage_form {
        DamageForm::Subtractive2016 => dpoly,
        DamageForm::Multiplicative2007 => {
            let d = S::one() + params.psi1 * t_at + params.psi2 * t_at * t_at;
            dpoly / (d * d)
        }
    }
}

/// Abatement cost as a fraction of gross output.
pub fn abatement_cost<S: Scalar>(mu: S, theta1: S, theta2: S) -> S {
    theta1 * mu.powf(theta2)
}

/// Fraction of gross output left after damages and abatement.
pub fn net_output_share<S: Scalar>(damage_frac: S, abatement_frac: S, form: DamageForm) -> S {
    match form {
        DamageForm::Subtractive2016 => S::one() - abatement_frac - damage_frac,
        DamageForm::Multiplicative2007 => (S::one() - damage_frac) * (S::one() - abatement_frac),
    }
}

/// Advances the economy one period.
pub fn step_economy<S: Scalar>(
    state: &EconState<S>,
    controls: Controls<S>,
    t_at: S,
    params: &EconParams<S>,
    exo: &ExogenousPath<S>,
) -> Result<EconStep<S>, EconError> {
    for (name, value) in [("mu", controls.mu), ("s", controls.s)] {
        if !(value >= S::zero() && value <= S::one()) {
            return Err(EconError::ControlOutOfBounds {
                name,
                value: value.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let t = state.period;
    let y_gross = gross_output(state.k, t, params, exo)?;
    let damage_frac = damages(t_at, params);
    let abatement_frac = abatement_cost(controls.mu, exo.theta1[t], params.theta2);
    let y_net = y_gross * net_output_share(damage_frac, abatement_frac, params.damage_form);
    let investment = controls.s * y_net;
    let consumption = y_net - investment;
    if !(consumption > S::zero()) {
        return Err(EconError::NonPositiveConsumption(consumption.to_f64().unwrap_or(f64::NAN)));
    }
    let dt = params.t_step;
    let k_next = (S::one() - params.delta_k).powf(dt) * state.k + dt * investment;
    if !(k_next > S::zero()) {
        return Err(EconError::NonPositiveCapital(k_next.to_f64().unwrap_or(f64::NAN)));
    }
    let emissions_industrial = exo.sigma[t] * y_gross * (S::one() - controls.mu);
    Ok(EconStep {
        k_next,
        y_gross,
        y_net,
        damage_frac,
        abatement_frac,
        investment,
        consumption,
        emissions_industrial,
        emissions: emissions_industrial + exo.e_land[t],
    })
}

/// Consumption argument of the utility function.
pub fn utility_argument<S: Scalar>(c: S, l: S, scale: UtilityScale) -> S {
    match scale {
        UtilityScale::PerCapita2007 => c / l,
        UtilityScale::PerCapitaThousands2016 => c / (S::lit(1000.0) * l),
    }
}

/// Utility of one period, weighted by its length and population.
pub fn period_utility<S: Scalar>(c: S, l: S, params: &EconParams<S>) -> S {
    let x = utility_argument(c, l, params.utility_scale);
    let e = S::one() - S::one() / params.ies;
    let per_capita = if e.abs() < S::lit(1e-12) {
        x.ln()
    } else {
        (x.powf(e) - S::one()) / e
    };
    params.t_step * per_capita * l
}

/// Per-period discount factor.
pub fn discount_factor<S: Scalar>(params: &EconParams<S>) -> S {
    (S::one() + params.rho).powf(-params.t_step)
}
