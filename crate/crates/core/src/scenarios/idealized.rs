use serde::{Deserialize, Serialize};

use super::history::whole_dt;
use super::{ResultTable, ScenarioError};
use crate::climate::{run_climate, ClimatePreset, ClimateState, Driver, ExogenousForcing};

/// Nominal starting concentration of the 1% ramp.
pub const RAMP_BASE_PPM: f64 = 285.0;
const TCR_YEAR: f64 = 70.0;
const QUADRUPLING_YEAR: f64 = 140.0;

fn steps_for(horizon_years: f64, dt: f64) -> Result<(usize, usize), ScenarioError> {
    let step = whole_dt(dt)?;
    if !(horizon_years > 0.0) || horizon_years % dt != 0.0 {
        return Err(ScenarioError::InvalidHorizon(format!(
            "horizon {} is not a positive multiple of the {}-year step",
            horizon_years, dt
        )));
    }
    Ok((step, (horizon_years / dt) as usize))
}

fn pinned_run(
    preset: &ClimatePreset<f64>,
    mass: &[f64],
    dt: f64,
    n: usize,
) -> Result<Vec<ClimateState<f64>>, ScenarioError> {
    Ok(run_climate(
        preset,
        Driver::Concentration(mass),
        ExogenousForcing::Zero,
        preset.equilibrium_state(),
        dt,
        n,
    )?)
}

/// Temperature response to an instantaneous quadrupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbruptResult {
    pub years: Vec<f64>,
    pub t_at: Vec<f64>,
    pub t_oc: Vec<f64>,
}

impl AbruptResult {
    pub fn t_at_year(&self, year: f64) -> Option<f64> {
        self.years.iter().position(|&y| y == year).map(|k| self.t_at[k])
    }

    /// Columns `year,t_at,t_oc`.
    pub fn table(&self) -> ResultTable {
        ResultTable::new(self.years.clone())
            .with("t_at", self.t_at.clone())
            .with("t_oc", self.t_oc.clone())
    }
}

/// Atmosphere pinned at four times the baseline mass from year 0, no non-CO2 forcing.
pub fn abrupt_4xco2(preset: &ClimatePreset<f64>, horizon_years: f64, dt: f64) -> Result<AbruptResult, ScenarioError> {
    let (step, n) = steps_for(horizon_years, dt)?;
    let mass = vec![4.0 * preset.m_base; n + 1];
    let states = pinned_run(preset, &mass, dt, n)?;
    Ok(AbruptResult {
        years: (0..=n).map(|k| (k * step) as f64).collect(),
        t_at: states.iter().map(|s| s.t.at).collect(),
        t_oc: states.iter().map(|s| s.t.oc).collect(),
    })
}

/// Temperature response to a 1%/yr concentration increase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampResult {
    pub years: Vec<f64>,
    pub ppm: Vec<f64>,
    pub t_at: Vec<f64>,
    pub t_oc: Vec<f64>,
}

impl RampResult {
    pub fn t_at_year(&self, year: f64) -> Option<f64> {
        self.years.iter().position(|&y| y == year).map(|k| self.t_at[k])
    }

    /// Warming at doubling (year 70).
    pub fn tcr(&self) -> Option<f64> {
        self.t_at_year(TCR_YEAR)
    }

    /// Warming at quadrupling (year 140).
    pub fn t_quadrupling(&self) -> Option<f64> {
        self.t_at_year(QUADRUPLING_YEAR)
    }

    /// Columns `year,ppm,t_at,t_oc`.
    pub fn table(&self) -> ResultTable {
        ResultTable::new(self.years.clone())
            .with("ppm", self.ppm.clone())
            .with("t_at", self.t_at.clone())
            .with("t_oc", self.t_oc.clone())
    }
}

/// Atmospheric mass grows 1%/yr from the preset's baseline.
pub fn ramp_1pct(preset: &ClimatePreset<f64>, horizon_years: f64, dt: f64) -> Result<RampResult, ScenarioError> {
    let (step, n) = steps_for(horizon_years, dt)?;
    let years: Vec<f64> = (0..=n).map(|k| (k * step) as f64).collect();
    let growth: Vec<f64> = years.iter().map(|t| 1.01f64.powf(*t)).collect();
    let mass: Vec<f64> = growth.iter().map(|g| preset.m_base * g).collect();
    let states = pinned_run(preset, &mass, dt, n)?;
    Ok(RampResult {
        ppm: growth.iter().map(|g| RAMP_BASE_PPM * g).collect(),
        t_at: states.iter().map(|s| s.t.at).collect(),
        t_oc: states.iter().map(|s| s.t.oc).collect(),
        years,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::climate::PresetName;
    use approx::assert_relative_eq;

    fn preset(name: PresetName) -> ClimatePreset<f64> {
        ClimatePreset::from_name(name)
    }

    #[test]
    fn quadrupling_approaches_twice_ecs() {
        let r = abrupt_4xco2(&preset(PresetName::Cdice), 1000.0, 1.0).unwrap();
        assert_eq!(r.years.len(), 1001);
        assert_relative_eq!(r.t_at_year(1000.0).unwrap(), 6.5, max_relative = 0.025);
    }

    #[test]
    fn dice2016_warms_slower_initially() {
        let c = abrupt_4xco2(&preset(PresetName::Cdice), 100.0, 1.0).unwrap();
        let d = abrupt_4xco2(&preset(PresetName::Dice2016), 100.0, 5.0).unwrap();
        assert!(d.t_at_year(10.0).unwrap() < c.t_at_year(10.0).unwrap());
    }

    #[test]
    fn geoffroy_presets_ordered_after_initial_adjustment() {
        let giss = abrupt_4xco2(&preset(PresetName::CdiceGiss), 300.0, 1.0).unwrap();
        let mmm = abrupt_4xco2(&preset(PresetName::Cdice), 300.0, 1.0).unwrap();
        let had = abrupt_4xco2(&preset(PresetName::CdiceHadgem), 300.0, 1.0).unwrap();
        for k in 4..=300 {
            assert!(giss.t_at[k] < mmm.t_at[k] && mmm.t_at[k] < had.t_at[k], "year {}", k);
        }
    }

    #[test]
    fn horizon_must_match_step() {
        assert!(abrupt_4xco2(&preset(PresetName::Cdice), 12.0, 5.0).is_err());
        assert!(ramp_1pct(&preset(PresetName::Cdice), 0.0, 1.0).is_err());
    }

    #[test]
    fn ramp_concentration_quadruples() {
        let r = ramp_1pct(&preset(PresetName::Cdice), 140.0, 1.0).unwrap();
        assert_relative_eq!(r.ppm[140] / r.ppm[0], 4.0, max_relative = 0.007);
        assert_relative_eq!(r.ppm[140], 285.0 * 1.01f64.powi(140), max_relative = 1e-12);
    }

    #[test]
    fn ramp_stays_below_equilibrium() {
        for name in PresetName::ALL {
            let p = preset(name);
            let dt = if p.dt_locked { p.native_dt as f64 } else { 1.0 };
            let r = ramp_1pct(&p, 140.0, dt).unwrap();
            assert!(r.t_quadrupling().unwrap() < 2.0 * p.temp.t_2xco2, "{}", name);
        }
        let tcr = ramp_1pct(&preset(PresetName::Cdice), 140.0, 1.0).unwrap().tcr().unwrap();
        assert!((1.3..=2.3).contains(&tcr));
    }

    #[test]
    fn step_size_drift_is_small() {
        let p = preset(PresetName::Cdice);
        let a = ramp_1pct(&p, 300.0, 1.0).unwrap();
        let b = ramp_1pct(&p, 300.0, 5.0).unwrap();
        // the first coarse step sees zero forcing and overshoots the bound
        assert!((a.t_at[5] - b.t_at[1] - 0.0532).abs() < 1e-4);
        for (k, t) in b.t_at.iter().enumerate().skip(2) {
            assert!((t - a.t_at[5 * k]).abs() < 0.05, "year {}: {} vs {}", 5 * k, t, a.t_at[5 * k]);
        }
    }

    #[test]
    fn reruns_are_identical() {
        let p = preset(PresetName::CdiceHadgem);
        assert_eq!(ramp_1pct(&p, 140.0, 1.0).unwrap(), ramp_1pct(&p, 140.0, 1.0).unwrap());
    }
}
