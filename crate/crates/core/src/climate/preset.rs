use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CarbonMass, CarbonParams, ClimateError, ClimateState, TempParams, Temperature};
use crate::Scalar;

/// Named climate model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "DICE-2016")]
    Dice2016,
    #[serde(rename = "DICE-2016-BF")]
    Dice2016Bf,
    #[serde(rename = "CDICE")]
    Cdice,
    #[serde(rename = "CDICE-HadGEM2-ES")]
    CdiceHadgem,
    #[serde(rename = "CDICE-GISS-E2-R")]
    CdiceGiss,
    #[serde(rename = "DICE-2007")]
    Dice2007,
}

impl PresetName {
    pub const ALL: [PresetName; 6] = [
        PresetName::Dice2016,
        PresetName::Dice2016Bf,
        PresetName::Cdice,
        PresetName::CdiceHadgem,
        PresetName::CdiceGiss,
        PresetName::Dice2007,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PresetName::Dice2016 => "DICE-2016",
            PresetName::Dice2016Bf => "DICE-2016-BF",
            PresetName::Cdice => "CDICE",
            PresetName::CdiceHadgem => "CDICE-HadGEM2-ES",
            PresetName::CdiceGiss => "CDICE-GISS-E2-R",
            PresetName::Dice2007 => "DICE-2007",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = ClimateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        let name = match key.as_str() {
            "DICE-2016" | "DICE2016" => PresetName::Dice2016,
            "DICE-2016-BF" | "DICE2016-BF" => PresetName::Dice2016Bf,
            "CDICE" | "CDICE-MMM" => PresetName::Cdice,
            "CDICE-HADGEM2-ES" | "HADGEM2-ES" | "HADGEM" => PresetName::CdiceHadgem,
            "CDICE-GISS-E2-R" | "GISS-E2-R" | "GISS" => PresetName::CdiceGiss,
            "DICE-2007" | "DICE2007" => PresetName::Dice2007,
            _ => return Err(ClimateError::UnknownPreset(s.to_string())),
        };
        Ok(name)
    }
}

/// A complete climate calibration.
///
/// `carbon` and `temp` hold the coefficients exactly as tabulated; they refer
/// to steps of `coeff_period` years. Use [`ClimatePreset::annual_carbon`] and
/// [`ClimatePreset::annual_temp`] for per-year rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClimatePreset<S = f64> {
    pub name: PresetName,
    pub carbon: CarbonParams<S>,
    pub temp: TempParams<S>,
    /// Years per step the tabulated rates refer to.
    pub coeff_period: u32,
    /// Default integration step in years.
    pub native_dt: u32,
    /// Whether the preset only runs at its native step.
    pub dt_locked: bool,
    /// 2015 reservoir masses.
    pub m_ini: CarbonMass<S>,
    /// 2015 temperatures.
    pub t_ini: Temperature<S>,
    /// Forcing baseline for atmospheric carbon.
    pub m_base: S,
}

impl<S: Scalar> ClimatePreset<S> {
    pub fn from_name(name: PresetName) -> Self {
        let l = S::lit;
        let mass = |a, u, o| CarbonMass::new(l(a), l(u), l(o));
        let temp = |c1, c3, c4, f2x, ecs| TempParams {
            c1: l(c1),
            c3: l(c3),
            c4: l(c4),
            f_2xco2: l(f2x),
            t_2xco2: l(ecs),
        };
        let cdice_carbon = CarbonParams {
            b12: l(0.053),
            b23: l(0.0042),
            m_eq: mass(0.607, 0.600, 1.772),
        };
        let dice16_meq = mass(0.588, 0.360, 1.720);
        let cdice = |name, t| ClimatePreset {
            name,
            carbon: cdice_carbon,
            temp: t,
            coeff_period: 1,
            native_dt: 1,
            dt_locked: false,
            m_ini: mass(0.85009, 0.7649, 1.79912),
            t_ini: Temperature::new(l(1.2778), l(0.3132)),
            m_base: l(0.607),
        };
        match name {
            PresetName::Dice2016 => ClimatePreset {
                name,
                carbon: CarbonParams {
                    b12: l(0.12),
                    b23: l(0.007),
                    m_eq: dice16_meq,
                },
                temp: temp(0.1005, 0.088, 0.025, 3.6813, 3.1),
                coeff_period: 5,
                native_dt: 5,
                dt_locked: true,
                m_ini: mass(0.851, 0.460, 1.740),
                t_ini: Temperature::new(l(0.85), l(0.0068)),
                m_base: l(0.588),
            },
            PresetName::Dice2016Bf => ClimatePreset {
                name,
                carbon: CarbonParams {
                    b12: l(0.024),
                    b23: l(0.0014),
                    m_eq: dice16_meq,
                },
                temp: temp(0.1005, 0.876, 0.005, 3.6813, 3.1),
                coeff_period: 1,
                native_dt: 1,
                dt_locked: false,
                m_ini: mass(0.851, 0.460, 1.740),
                t_ini: Temperature::new(l(0.85), l(0.0068)),
                m_base: l(0.588),
            },
            PresetName::Cdice => cdice(name, temp(0.137, 0.73, 0.00689, 3.45, 3.25)),
            PresetName::CdiceHadgem => cdice(name, temp(0.154, 0.55, 0.00671, 2.95, 4.55)),
            PresetName::CdiceGiss => cdice(name, temp(0.213, 1.16, 0.00921, 3.65, 2.15)),
            PresetName::Dice2007 => ClimatePreset {
                name,
                carbon: CarbonParams {
                    b12: l(0.0189288),
                    b23: l(0.005),
                    m_eq: mass(0.587473, 1.143894, 18.340),
                },
                temp: temp(0.022, 0.3, 0.01, 3.8, 3.0),
                coeff_period: 1,
                native_dt: 10,
                dt_locked: false,
                m_ini: mass(0.8089, 1.255, 18.365),
                t_ini: Temperature::new(l(0.7307), l(0.0068)),
                m_base: l(0.5964),
            },
        }
    }

    /// Carbon-cycle rates per year.
    pub fn annual_carbon(&self) -> CarbonParams<S> {
        self.carbon.scaled(S::one() / S::lit(self.coeff_period as f64))
    }

    /// Energy-balance rates per year.
    pub fn annual_temp(&self) -> TempParams<S> {
        self.temp.scaled(S::one() / S::lit(self.coeff_period as f64))
    }

    /// Validates the step against the lock and both stability guards.
    pub fn check_dt(&self, dt: S) -> Result<(), ClimateError> {
        if self.dt_locked && dt != S::lit(self.native_dt as f64) {
            return Err(ClimateError::LockedStep {
                preset: self.name.to_string(),
                native: self.native_dt,
                requested: dt.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(dt >= S::one()) || dt.fract() != S::zero() {
            return Err(ClimateError::InvalidParameter {
                name: "dt",
                reason: format!("must be a positive whole number of years, got {:?}", dt),
            });
        }
        self.annual_carbon().check_step(dt)?;
        self.annual_temp().check_step(dt)
    }

    /// Copy expressed in per-year rates with the step lock lifted.
    pub fn unlocked(&self) -> Self {
        Self {
            carbon: self.annual_carbon(),
            temp: self.annual_temp(),
            coeff_period: 1,
            native_dt: 1,
            dt_locked: false,
            ..*self
        }
    }

    /// Pre-industrial equilibrium state.
    pub fn equilibrium_state(&self) -> ClimateState<S> {
        ClimateState {
            m: self.carbon.m_eq,
            t: Temperature::new(S::zero(), S::zero()),
        }
    }

    /// Tabulated 2015 state.
    pub fn initial_state(&self) -> ClimateState<S> {
        ClimateState {
            m: self.m_ini,
            t: self.t_ini,
        }
    }

    pub fn validate(&self) -> Result<(), ClimateError> {
        self.carbon.validate()?;
        self.temp.validate()?;
        if !(self.m_base > S::zero()) {
            return Err(ClimateError::InvalidParameter {
                name: "m_base",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::climate::build_transfer_matrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cdice_table_values() {
        let p = ClimatePreset::<f64>::from_name(PresetName::Cdice);
        assert_eq!(p.temp.c1, 0.137);
        assert_eq!(p.temp.c3, 0.73);
        assert_eq!(p.temp.c4, 0.00689);
        assert_eq!(p.temp.t_2xco2, 3.25);
        assert_eq!(p.temp.f_2xco2, 3.45);
        assert_eq!(p.carbon.b12, 0.053);
        assert_eq!(p.carbon.b23, 0.0042);
        assert_eq!(p.carbon.m_eq, CarbonMass::new(0.607, 0.600, 1.772));
        assert_eq!(p.m_ini, CarbonMass::new(0.85009, 0.7649, 1.79912));
        assert_eq!(p.t_ini, Temperature::new(1.2778, 0.3132));
    }

    #[test]
    fn extreme_presets_share_cdice_carbon() {
        let base = ClimatePreset::<f64>::from_name(PresetName::Cdice);
        for name in [PresetName::CdiceHadgem, PresetName::CdiceGiss] {
            let p = ClimatePreset::<f64>::from_name(name);
            assert_eq!(p.carbon, base.carbon);
            assert_eq!(p.m_ini, base.m_ini);
        }
        let had = ClimatePreset::<f64>::from_name(PresetName::CdiceHadgem);
        assert_eq!((had.temp.t_2xco2, had.temp.f_2xco2), (4.55, 2.95));
        let giss = ClimatePreset::<f64>::from_name(PresetName::CdiceGiss);
        assert_eq!((giss.temp.t_2xco2, giss.temp.f_2xco2), (2.15, 3.65));
    }

    #[test]
    fn dice2016_annual_rates_match_generic_table() {
        let p = ClimatePreset::<f64>::from_name(PresetName::Dice2016);
        let c = p.annual_carbon();
        let t = p.annual_temp();
        assert_abs_diff_eq!(c.b12, 0.024, epsilon = 1e-15);
        assert_abs_diff_eq!(c.b23, 0.0014, epsilon = 1e-15);
        assert_abs_diff_eq!(t.c1, 0.0201, epsilon = 1e-15);
        assert_abs_diff_eq!(t.c4, 0.005, epsilon = 1e-15);
        assert_eq!(t.c3, 0.088);
    }

    #[test]
    fn dice2016_step_is_locked() {
        let p = ClimatePreset::<f64>::from_name(PresetName::Dice2016);
        assert!(p.check_dt(5.0).is_ok());
        assert!(matches!(p.check_dt(1.0), Err(ClimateError::LockedStep { .. })));
        assert!(p.unlocked().check_dt(1.0).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for n in PresetName::ALL {
            assert_eq!(n.as_str().parse::<PresetName>().unwrap(), n);
        }
        assert!("DICE-1999".parse::<PresetName>().is_err());
    }

    #[test]
    fn every_preset_is_valid_and_column_stochastic() {
        for n in PresetName::ALL {
            let p = ClimatePreset::<f64>::from_name(n);
            p.validate().unwrap();
            let a = build_transfer_matrix(&p.annual_carbon().scaled(p.native_dt as f64)).unwrap();
            for j in 0..3 {
                let s: f64 = (0..3).map(|i| a[i][j]).sum();
                assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
            }
            assert!(p.check_dt(p.native_dt as f64).is_ok());
        }
    }

    #[test]
    fn single_precision_preset() {
        let p = ClimatePreset::<f32>::from_name(PresetName::Cdice);
        assert!((p.temp.lambda() - 3.45 / 3.25).abs() < 1e-6);
    }
}
