use serde::{Deserialize, Serialize};

use super::{ResultTable, ScenarioError};
use crate::climate::{run_climate, ClimatePreset, ClimateState, Driver, ExogenousForcing};
use crate::drivers::{concentration_to_mass, mass_to_concentration, RcpId, ScenarioInputs};
pub use crate::econ::FexMode as ForcingMode;

/// First year of the historical record and of the spin-up.
pub const START_YEAR: i32 = 1850;
/// Year the present-day state refers to.
pub const PRESENT_YEAR: i32 = 2015;

const LINEAR_FEX_2015: f64 = 0.5;
const LINEAR_FEX_2100: f64 = 1.0;
const LINEAR_FEX_RAMP_YEARS: f64 = 85.0;

/// Linear-ramp non-CO2 forcing on the calendar axis: zero in 1850, rising to
/// its present-day value by 2015, then following the ramp law.
pub fn linear_exogenous_forcing(year: f64) -> f64 {
    let present = PRESENT_YEAR as f64;
    if year <= present {
        let start = START_YEAR as f64;
        LINEAR_FEX_2015 * ((year - start) / (present - start)).max(0.0)
    } else {
        let t = (year - present).min(LINEAR_FEX_RAMP_YEARS);
        LINEAR_FEX_2015 + (LINEAR_FEX_2100 - LINEAR_FEX_2015) * t / LINEAR_FEX_RAMP_YEARS
    }
}

/// Means of consecutive `dt`-year blocks of an annual series.
pub fn step_average(annual: &[f64], dt: usize, n_steps: usize) -> Result<Vec<f64>, ScenarioError> {
    if dt == 0 || annual.len() < dt * n_steps {
        return Err(ScenarioError::InvalidHorizon(format!(
            "{} steps of {} years need {} annual values, got {}",
            n_steps,
            dt,
            dt * n_steps,
            annual.len()
        )));
    }
    Ok(annual
        .chunks(dt)
        .take(n_steps)
        .map(|c| c.iter().sum::<f64>() / dt as f64)
        .collect())
}

pub(crate) fn whole_dt(dt: f64) -> Result<usize, ScenarioError> {
    if dt >= 1.0 && dt.fract() == 0.0 {
        Ok(dt as usize)
    } else {
        Err(ScenarioError::InvalidHorizon(format!("step must be whole years, got {}", dt)))
    }
}

fn forcing_path(mode: ForcingMode, start_year: i32, dt: usize, n_steps: usize) -> Vec<f64> {
    match mode {
        ForcingMode::Linear => (0..n_steps)
            .map(|k| linear_exogenous_forcing((start_year + (k * dt) as i32) as f64))
            .collect(),
        ForcingMode::Proportional(_) => Vec::new(),
    }
}

fn forcing_for<'a>(mode: ForcingMode, path: &'a [f64]) -> ExogenousForcing<'a, f64> {
    match mode {
        ForcingMode::Linear => ExogenousForcing::Path(path),
        ForcingMode::Proportional(share) => ExogenousForcing::Proportional(share),
    }
}

/// Emission-driven run from the 1850 equilibrium over annual emissions in GtC/yr.
pub(crate) fn integrate_history(
    preset: &ClimatePreset<f64>,
    annual_gtc: &[f64],
    mode: ForcingMode,
    dt: f64,
    n_steps: usize,
) -> Result<Vec<ClimateState<f64>>, ScenarioError> {
    let step = whole_dt(dt)?;
    let e: Vec<f64> = step_average(annual_gtc, step, n_steps)?
        .into_iter()
        .map(|v| v / 1000.0)
        .collect();
    let fex = forcing_path(mode, START_YEAR, step, n_steps);
    Ok(run_climate(
        preset,
        Driver::Emissions(&e),
        forcing_for(mode, &fex),
        preset.equilibrium_state(),
        dt,
        n_steps,
    )?)
}

/// Present-day state found by the spin-up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinUp {
    pub year: i32,
    pub state: ClimateState<f64>,
    pub ppm: f64,
}

/// Integrates from the 1850 equilibrium until the atmosphere first reaches
/// `target_ppm`. `annual_gtc` starts in 1850.
pub fn spin_up_1850(
    preset: &ClimatePreset<f64>,
    annual_gtc: &[f64],
    mode: ForcingMode,
    target_ppm: f64,
    dt: f64,
) -> Result<SpinUp, ScenarioError> {
    let step = whole_dt(dt)?;
    let n_steps = annual_gtc.len() / step;
    let states = integrate_history(preset, annual_gtc, mode, dt, n_steps)?;
    for (k, s) in states.iter().enumerate() {
        let ppm = mass_to_concentration(s.m.at);
        if ppm >= target_ppm {
            return Ok(SpinUp {
                year: START_YEAR + (k * step) as i32,
                state: *s,
                ppm,
            });
        }
    }
    let last = states.last().expect("run includes the start state");
    Err(ScenarioError::TargetNotReached {
        target: target_ppm,
        last: mass_to_concentration(last.m.at),
        year: START_YEAR + (n_steps * step) as i32,
    })
}

/// What drives the carbon cycle in an RCP run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RcpMode {
    Concentration,
    Emission,
}

/// One RCP run on the calendar axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcpResult {
    pub rcp: RcpId,
    pub mode: RcpMode,
    pub years: Vec<i32>,
    pub ppm: Vec<f64>,
    pub prescribed_ppm: Vec<f64>,
    pub t_at: Vec<f64>,
    pub t_oc: Vec<f64>,
}

impl RcpResult {
    fn index(&self, year: i32) -> Option<usize> {
        self.years.iter().position(|&y| y == year)
    }

    pub fn ppm_in(&self, year: i32) -> Option<f64> {
        self.index(year).map(|k| self.ppm[k])
    }

    pub fn t_at_in(&self, year: i32) -> Option<f64> {
        self.index(year).map(|k| self.t_at[k])
    }

    /// Columns `year,ppm,prescribed_ppm,t_at,t_oc`.
    pub fn table(&self) -> ResultTable {
        ResultTable::new(self.years.iter().map(|&y| y as f64).collect())
            .with("ppm", self.ppm.clone())
            .with("prescribed_ppm", self.prescribed_ppm.clone())
            .with("t_at", self.t_at.clone())
            .with("t_oc", self.t_oc.clone())
    }
}

/// Runs 1850 to the end of `inputs` from the pre-industrial equilibrium.
pub fn rcp_run(
    preset: &ClimatePreset<f64>,
    inputs: &ScenarioInputs,
    mode: RcpMode,
    fex: ForcingMode,
    dt: f64,
) -> Result<RcpResult, ScenarioError> {
    let step = whole_dt(dt)?;
    let first = inputs.first_year();
    if first != START_YEAR {
        return Err(ScenarioError::InvalidHorizon(format!("inputs start in {}, need {}", first, START_YEAR)));
    }
    let n_steps = (inputs.last_year() - first) as usize / step;
    let years: Vec<i32> = (0..=n_steps).map(|k| first + (k * step) as i32).collect();
    let prescribed_ppm: Vec<f64> = years
        .iter()
        .map(|&y| inputs.concentration[(y - first) as usize])
        .collect();
    let fex_path = forcing_path(fex, first, step, n_steps);
    let states = match mode {
        RcpMode::Emission => integrate_history(preset, &inputs.emissions, fex, dt, n_steps)?,
        RcpMode::Concentration => {
            let mass: Vec<f64> = prescribed_ppm.iter().map(|&c| concentration_to_mass(c)).collect();
            run_climate(
                preset,
                Driver::Concentration(&mass),
                forcing_for(fex, &fex_path),
                preset.equilibrium_state(),
                dt,
                n_steps,
            )?
        }
    };
    Ok(RcpResult {
        rcp: inputs.rcp,
        mode,
        ppm: states.iter().map(|s| mass_to_concentration(s.m.at)).collect(),
        t_at: states.iter().map(|s| s.t.at).collect(),
        t_oc: states.iter().map(|s| s.t.oc).collect(),
        years,
        prescribed_ppm,
    })
}
