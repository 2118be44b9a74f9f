use serde::{Deserialize, Serialize};

use super::PolicyError;
use crate::climate::{build_transfer_matrix, ClimatePreset, ClimateState, PresetName, TempParams, TransferMatrix};
use crate::econ::{EconParams, EconPreset, ExogenousPath, FexMode};

/// Tons of CO2 per ton of carbon. Divides the costate ratio and the marginal
/// abatement cost, whose backstop price is quoted per ton of CO2.
pub const TON_C_PER_TON_CO2: f64 = 3.666;

/// Which controls the planner chooses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Mitigation fixed at zero, savings optimal.
    Bau,
    /// Mitigation and savings jointly optimal.
    Optimal,
}

/// Damage calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DamageChoice {
    /// Coefficients of the economy preset.
    Nordhaus,
    HowardSterner,
    /// No climate damages.
    Zero,
}

/// Box bounds on abatement and savings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlBounds {
    pub mu: (f64, f64),
    pub s: (f64, f64),
}

impl ControlBounds {
    pub fn for_scenario(scenario: Scenario) -> Self {
        Self {
            mu: match scenario {
                Scenario::Bau => (0.0, 0.0),
                Scenario::Optimal => (0.0, 1.0),
            },
            s: (0.0, 0.95),
        }
    }
}

/// Value assigned to the years after the simulated horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminalValue {
    /// Welfare ends with the last simulated period.
    Truncated,
    /// The last simulated period repeats forever.
    Stationary,
}

/// User-facing settings from which a [`PolicyProblem`] is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub preset: PresetName,
    pub scenario: Scenario,
    /// Pure rate of time preference per year.
    pub rho: f64,
    /// Years per period.
    pub dt: f64,
    /// Decision horizon in years; defaults to 600, or 1000 when `rho <= 0.001`.
    pub horizon_years: Option<f64>,
    /// Years the last controls are held fixed after the decision horizon.
    pub continuation_years: f64,
    pub damage: DamageChoice,
    pub fex: FexMode,
    pub terminal: TerminalValue,
    /// Calendar year of period 0.
    pub start_year: f64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            preset: PresetName::Cdice,
            scenario: Scenario::Optimal,
            rho: 0.015,
            dt: 1.0,
            horizon_years: None,
            continuation_years: 400.0,
            damage: DamageChoice::Nordhaus,
            fex: FexMode::Linear,
            terminal: TerminalValue::Stationary,
            start_year: 2015.0,
        }
    }
}

impl PolicyConfig {
    pub fn decision_years(&self) -> f64 {
        self.horizon_years
            .unwrap_or(if self.rho <= 0.001 { 1000.0 } else { 600.0 })
    }
}

/// Discretized planner problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyProblem {
    pub preset: PresetName,
    /// Climate in per-year rates.
    pub climate: ClimatePreset<f64>,
    pub econ: EconParams<f64>,
    /// Exogenous series for every simulated period.
    pub exo: ExogenousPath<f64>,
    /// Number of decision periods.
    pub horizon: usize,
    /// Number of continuation periods.
    pub continuation: usize,
    pub dt: f64,
    pub bounds: ControlBounds,
    pub scenario: Scenario,
    pub fex: FexMode,
    pub terminal: TerminalValue,
    pub k0: f64,
    pub climate0: ClimateState<f64>,
    /// Calendar year of period 0.
    pub start_year: f64,
    pub(crate) transfer: TransferMatrix<f64>,
    pub(crate) temp: TempParams<f64>,
}

fn periods(years: f64, dt: f64, what: &str) -> Result<usize, PolicyError> {
    let n = years / dt;
    if !(n >= 0.0) || n.fract() != 0.0 {
        return Err(PolicyError::InvalidHorizon(format!(
            "{} of {} years is not a whole number of {}-year periods",
            what, years, dt
        )));
    }
    Ok(n as usize)
}

impl PolicyProblem {
    pub fn from_config(cfg: &PolicyConfig) -> Result<Self, PolicyError> {
        if !(cfg.dt >= 1.0) || cfg.dt.fract() != 0.0 {
            return Err(PolicyError::InvalidConfig(format!("dt must be whole years, got {}", cfg.dt)));
        }
        if !(cfg.rho > 0.0) {
            return Err(PolicyError::InvalidConfig(format!("rho must be positive, got {}", cfg.rho)));
        }
        if let FexMode::Proportional(share) = cfg.fex {
            if !(share >= 0.0) {
                return Err(PolicyError::InvalidConfig(format!("non-CO2 share must be nonnegative, got {}", share)));
            }
        }
        let decision = cfg.decision_years();
        if decision < 500.0 {
            return Err(PolicyError::InvalidHorizon(format!(
                "decision horizon of {} years is below the 500-year minimum",
                decision
            )));
        }
        let horizon = periods(decision, cfg.dt, "decision horizon")?;
        let continuation = periods(cfg.continuation_years, cfg.dt, "continuation")?;

        let climate = ClimatePreset::from_name(cfg.preset).unlocked();
        climate.check_dt(cfg.dt)?;
        let mut econ = match cfg.preset {
            PresetName::Dice2007 => EconPreset::dice2007(cfg.dt),
            _ => EconPreset::dice2016(cfg.dt),
        };
        match cfg.damage {
            DamageChoice::Nordhaus => {}
            DamageChoice::HowardSterner => econ = econ.with_howard_sterner(),
            DamageChoice::Zero => {
                econ.params.psi1 = 0.0;
                econ.params.psi2 = 0.0;
            }
        }
        econ.params.rho = cfg.rho;
        econ.params.validate()?;
        let exo = ExogenousPath::generate(&econ.exo, econ.params.theta2, 0, horizon + continuation);
        Self::assemble(cfg, climate, econ.params, exo, horizon, continuation, econ.k0)
    }

    fn assemble(
        cfg: &PolicyConfig,
        climate: ClimatePreset<f64>,
        econ: EconParams<f64>,
        exo: ExogenousPath<f64>,
        horizon: usize,
        continuation: usize,
        k0: f64,
    ) -> Result<Self, PolicyError> {
        let transfer = build_transfer_matrix(&climate.carbon.scaled(cfg.dt))?;
        Ok(Self {
            preset: cfg.preset,
            temp: climate.temp,
            climate0: climate.initial_state(),
            climate,
            econ,
            exo,
            horizon,
            continuation,
            dt: cfg.dt,
            bounds: ControlBounds::for_scenario(cfg.scenario),
            scenario: cfg.scenario,
            fex: cfg.fex,
            terminal: cfg.terminal,
            k0,
            start_year: cfg.start_year,
            transfer,
        })
    }

    /// Simulated periods: decision horizon plus continuation.
    pub fn periods(&self) -> usize {
        self.horizon + self.continuation
    }

    /// Number of decision variables.
    pub fn dim(&self) -> usize {
        2 * self.horizon
    }

    pub fn beta(&self) -> f64 {
        (1.0 + self.econ.rho).powf(-self.dt)
    }

    /// Welfare weight of period `t`, including the terminal value on the last period.
    pub fn weight(&self, t: usize) -> f64 {
        let beta = self.beta();
        let w = beta.powi(t as i32);
        match self.terminal {
            TerminalValue::Stationary if t + 1 == self.periods() => w / (1.0 - beta),
            _ => w,
        }
    }

    /// Discount weight of the first period beyond the simulated horizon.
    pub fn tail_weight(&self) -> f64 {
        self.beta().powi(self.periods() as i32)
    }

    pub fn year(&self, t: usize) -> f64 {
        self.start_year + t as f64 * self.dt
    }

    /// Period index of a calendar year, if it falls on the grid.
    pub fn period_of(&self, year: f64) -> Option<usize> {
        let k = (year - self.start_year) / self.dt;
        (k >= 0.0 && k.fract() == 0.0 && (k as usize) < self.horizon).then_some(k as usize)
    }

    /// Same problem with the scenario switched.
    pub fn with_scenario(&self, scenario: Scenario) -> Self {
        let mut p = self.clone();
        p.scenario = scenario;
        p.bounds = ControlBounds::for_scenario(scenario);
        p
    }

    /// Tail problem starting `offset` periods later from the given state, with
    /// the same terminal date.
    pub fn restarted(&self, offset: usize, k0: f64, climate0: ClimateState<f64>) -> Result<Self, PolicyError> {
        if offset >= self.horizon {
            return Err(PolicyError::InvalidHorizon(format!(
                "restart offset {} beyond the {}-period horizon",
                offset, self.horizon
            )));
        }
        let mut p = self.clone();
        p.exo = self.exo.tail(offset);
        p.horizon -= offset;
        p.k0 = k0;
        p.climate0 = climate0;
        p.start_year = self.year(offset);
        Ok(p)
    }

    /// Initial guess: abatement `0.03 * 1.01^t` and savings 0.25, projected into the bounds.
    pub fn initial_guess(&self) -> Vec<f64> {
        let n = self.horizon;
        let mut x = Vec::with_capacity(2 * n);
        for t in 0..n {
            let mu = (0.03 * 1.01f64.powf(t as f64 * self.dt)).min(1.0);
            x.push(mu.clamp(self.bounds.mu.0, self.bounds.mu.1));
        }
        x.extend(std::iter::repeat_n(0.25f64.clamp(self.bounds.s.0, self.bounds.s.1), n));
        x
    }

    pub fn lower(&self) -> Vec<f64> {
        let n = self.horizon;
        let mut v = vec![self.bounds.mu.0; n];
        v.extend(std::iter::repeat_n(self.bounds.s.0, n));
        v
    }

    pub fn upper(&self) -> Vec<f64> {
        let n = self.horizon;
        let mut v = vec![self.bounds.mu.1; n];
        v.extend(std::iter::repeat_n(self.bounds.s.1, n));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_horizons() {
        let p = PolicyProblem::from_config(&PolicyConfig::default()).unwrap();
        assert_eq!((p.horizon, p.continuation), (600, 400));
        assert_eq!(p.exo.len(), 1000);
        let low = PolicyConfig {
            rho: 0.001,
            ..PolicyConfig::default()
        };
        let p = PolicyProblem::from_config(&low).unwrap();
        assert_eq!((p.horizon, p.continuation), (1000, 400));
        assert!(p.tail_weight() > 0.2);
    }

    #[test]
    fn short_horizon_rejected() {
        let cfg = PolicyConfig {
            horizon_years: Some(300.0),
            ..PolicyConfig::default()
        };
        assert!(matches!(PolicyProblem::from_config(&cfg), Err(PolicyError::InvalidHorizon(_))));
        let cfg = PolicyConfig {
            dt: 7.0,
            ..PolicyConfig::default()
        };
        assert!(PolicyProblem::from_config(&cfg).is_err());
    }

    #[test]
    fn initial_guess_in_bounds() {
        let p = PolicyProblem::from_config(&PolicyConfig::default()).unwrap();
        let x = p.initial_guess();
        assert_eq!(x[0], 0.03);
        assert_eq!(x[599], 1.0);
        assert_eq!(x[600], 0.25);
        let b = p.with_scenario(Scenario::Bau);
        assert!(b.initial_guess()[..600].iter().all(|m| *m == 0.0));
    }

    #[test]
    fn economy_follows_climate_preset() {
        let cfg = PolicyConfig {
            preset: PresetName::Dice2007,
            dt: 10.0,
            ..PolicyConfig::default()
        };
        let p = PolicyProblem::from_config(&cfg).unwrap();
        assert_eq!(p.k0, 137.0);
        assert_eq!(p.econ.ies, 0.5);
        let p = PolicyProblem::from_config(&PolicyConfig::default()).unwrap();
        assert_eq!(p.k0, 223.0);
        assert_eq!(p.year(5), 2020.0);
        assert_eq!(p.period_of(2020.0), Some(5));
    }
}
