use serde::{Deserialize, Serialize};

use super::history::{integrate_history, linear_exogenous_forcing, whole_dt, ForcingMode, PRESENT_YEAR, START_YEAR};
use super::{ResultTable, ScenarioError};
use crate::climate::{forcing, step_carbon, step_temperature, ClimatePreset, ClimateState};

/// Remaining airborne fraction and warming caused by a carbon pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseResult {
    /// Years since the pulse.
    pub years: Vec<f64>,
    pub fraction: Vec<f64>,
    pub temp_anomaly: Vec<f64>,
    /// Control-run emissions in GtC/yr applied over each step.
    pub control_emissions: Vec<f64>,
    /// Atmospheric mass of the control run, 1000 GtC.
    pub control_m_at: Vec<f64>,
}

impl PulseResult {
    pub fn fraction_at(&self, year: f64) -> Option<f64> {
        self.years.iter().position(|&y| y == year).map(|k| self.fraction[k])
    }

    /// Year and value of the largest temperature anomaly.
    pub fn peak_anomaly(&self) -> (f64, f64) {
        let k = self
            .temp_anomaly
            .iter()
            .enumerate()
            .fold(0, |best, (k, v)| if *v > self.temp_anomaly[best] { k } else { best });
        (self.years[k], self.temp_anomaly[k])
    }

    /// Columns `year,airborne_fraction,temperature_anomaly,control_emissions`;
    /// the control emission of the final row is zero-padded.
    pub fn table(&self) -> ResultTable {
        let mut e = self.control_emissions.clone();
        e.push(0.0);
        ResultTable::new(self.years.clone())
            .with("airborne_fraction", self.fraction.clone())
            .with("temperature_anomaly", self.temp_anomaly.clone())
            .with("control_emissions", e)
    }
}

/// Two-run pulse protocol. The history from 1850 to the present is driven by
/// `annual_gtc`; the control run then holds the atmosphere at its present-day
/// mass, and the pulse run adds `pulse_gtc` instantaneously and reuses the
/// control emissions and non-CO2 forcing.
pub fn pulse_100gtc(
    preset: &ClimatePreset<f64>,
    annual_gtc: &[f64],
    mode: ForcingMode,
    pulse_gtc: f64,
    horizon_years: f64,
    dt: f64,
) -> Result<PulseResult, ScenarioError> {
    let step = whole_dt(dt)?;
    if !(horizon_years > 0.0) || horizon_years % dt != 0.0 {
        return Err(ScenarioError::InvalidHorizon(format!(
            "horizon {} is not a positive multiple of the {}-year step",
            horizon_years, dt
        )));
    }
    let history_steps = ((PRESENT_YEAR - START_YEAR) as usize).div_ceil(step);
    let history = integrate_history(preset, annual_gtc, mode, dt, history_steps)?;
    let present = *history.last().expect("history includes its start");
    let pulse_year = START_YEAR + (history_steps * step) as i32;

    let carbon = preset.annual_carbon();
    let temp = preset.annual_temp();
    let target = present.m.at;
    let n = (horizon_years / dt) as usize;

    let mut control = present;
    let mut pulsed = present;
    pulsed.m.at += pulse_gtc / 1000.0;
    let mut out = PulseResult {
        years: (0..=n).map(|k| (k * step) as f64).collect(),
        fraction: vec![1.0],
        temp_anomaly: vec![0.0],
        control_emissions: Vec::with_capacity(n),
        control_m_at: vec![target],
    };
    let advance = |s: &ClimateState<f64>, e: f64, f_ex: f64| -> Result<ClimateState<f64>, ScenarioError> {
        let f = forcing(s.m.at, preset.m_base, f_ex, &temp)?;
        Ok(ClimateState {
            m: step_carbon(&s.m, &carbon, e, dt)?,
            t: step_temperature(&s.t, f, &temp, dt),
        })
    };
    for k in 0..n {
        let e = carbon.b12 * target - carbon.b12 * carbon.r1() * control.m.uo;
        if !e.is_finite() || e < -target {
            return Err(ScenarioError::ControlDiverged { step: k, value: e * 1000.0 });
        }
        let f_ex = match mode {
            ForcingMode::Proportional(share) => share * forcing(control.m.at, preset.m_base, 0.0, &temp)?,
            ForcingMode::Linear => linear_exogenous_forcing((pulse_year + (k * step) as i32) as f64),
        };
        control = advance(&control, e, f_ex)?;
        pulsed = advance(&pulsed, e, f_ex)?;
        out.control_emissions.push(e * 1000.0);
        out.control_m_at.push(control.m.at);
        out.fraction.push((pulsed.m.at - control.m.at) * 1000.0 / pulse_gtc);
        out.temp_anomaly.push(pulsed.t.at - control.t.at);
    }
    Ok(out)
}
