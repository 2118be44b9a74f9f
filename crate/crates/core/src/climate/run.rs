use serde::{Deserialize, Serialize};

use super::{forcing, step_carbon, step_temperature, CarbonMass, ClimateError, ClimatePreset, Temperature};
use crate::Scalar;

/// Reservoir masses and layer temperatures at one time index.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClimateState<S = f64> {
    pub m: CarbonMass<S>,
    pub t: Temperature<S>,
}

/// What drives the carbon cycle in a run.
#[derive(Debug, Clone, Copy)]
pub enum Driver<'a, S> {
    /// Emissions in 1000 GtC per year, one entry per step.
    Emissions(&'a [S]),
    /// Atmospheric carbon mass in 1000 GtC, one entry per step.
    Concentration(&'a [S]),
}

/// Non-CO2 forcing.
#[derive(Debug, Clone, Copy)]
pub enum ExogenousForcing<'a, S> {
    Zero,
    /// W/m², one entry per step.
    Path(&'a [S]),
    /// Fixed share of the CO2 forcing.
    Proportional(S),
}

impl<S: Scalar> ExogenousForcing<'_, S> {
    /// Evaluates the non-CO2 forcing at step `k` given the CO2 forcing.
    pub fn at(&self, k: usize, f_co2: S) -> S {
        match self {
            ExogenousForcing::Zero => S::zero(),
            ExogenousForcing::Path(p) => p[k],
            ExogenousForcing::Proportional(share) => *share * f_co2,
        }
    }
}

/// Integrates the climate for `n_steps` steps of `dt` years.
///
/// Returns `n_steps + 1` states starting with `start`. In concentration mode
/// the atmospheric mass is overwritten from the path before forcing is
/// evaluated.
pub fn run_climate<S: Scalar>(
    preset: &ClimatePreset<S>,
    driver: Driver<'_, S>,
    f_ex: ExogenousForcing<'_, S>,
    start: ClimateState<S>,
    dt: S,
    n_steps: usize,
) -> Result<Vec<ClimateState<S>>, ClimateError> {
    preset.check_dt(dt)?;
    let input_len = match driver {
        Driver::Emissions(e) => e.len(),
        Driver::Concentration(c) => c.len(),
    };
    if input_len < n_steps {
        return Err(ClimateError::PathLength {
            needed: n_steps,
            got: input_len,
        });
    }
    if let ExogenousForcing::Path(p) = f_ex {
        if p.len() < n_steps {
            return Err(ClimateError::PathLength {
                needed: n_steps,
                got: p.len(),
            });
        }
    }
    let carbon = preset.annual_carbon();
    let temp = preset.annual_temp();
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut s = start;
    for k in 0..n_steps {
        let e = match driver {
            Driver::Emissions(e) => e[k],
            Driver::Concentration(c) => {
                s.m.at = c[k];
                S::zero()
            }
        };
        out.push(s);
        let f_co2 = forcing(s.m.at, preset.m_base, S::zero(), &temp)?;
        let f = f_co2 + f_ex.at(k, f_co2);
        s = ClimateState {
            m: step_carbon(&s.m, &carbon, e, dt)?,
            t: step_temperature(&s.t, f, &temp, dt),
        };
    }
    if let Driver::Concentration(c) = driver {
        if let Some(v) = c.get(n_steps) {
            s.m.at = *v;
        }
    }
    out.push(s);
    Ok(out)
}
