use std::fs;
use std::path::Path;

use super::{evaluate, PolicyError, PolicyProblem, TON_C_PER_TON_CO2};

/// Abatement at or above this level is treated as the backstop regime, where
/// the carbon tax no longer equals the marginal abatement cost.
pub const BACKSTOP_MU: f64 = 0.99;

/// Per-period path of a control vector over the decision horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub years: Vec<f64>,
    /// Reservoir masses in GtC.
    pub m_at: Vec<f64>,
    pub m_uo: Vec<f64>,
    pub m_lo: Vec<f64>,
    pub t_at: Vec<f64>,
    pub t_oc: Vec<f64>,
    pub k: Vec<f64>,
    pub consumption: Vec<f64>,
    pub y_gross: Vec<f64>,
    pub y_net: Vec<f64>,
    pub damage_frac: Vec<f64>,
    pub mu: Vec<f64>,
    pub s: Vec<f64>,
    /// Total emissions in GtC per year.
    pub emissions: Vec<f64>,
    /// Social cost of carbon in 2010 USD per ton of carbon.
    pub scc: Vec<f64>,
    /// Marginal abatement cost, same unit as `scc`.
    pub carbon_tax: Vec<f64>,
    /// Periods in the backstop regime.
    pub backstop: Vec<bool>,
    /// State-timed social cost of carbon at period 0.
    pub scc_state0: f64,
    /// Whether the controls are a converged optimum.
    pub converged: bool,
}

impl Trajectory {
    pub fn build(problem: &PolicyProblem, x: &[f64], converged: bool) -> Result<Self, PolicyError> {
        let ev = evaluate(problem, x, true)?;
        let h = problem.horizon;
        let exo = &problem.exo;
        let theta2 = problem.econ.theta2;
        let scc_at = |t: usize| -ev.cost_m[t][0] / ev.cost_k[t] / TON_C_PER_TON_CO2;
        let mut tr = Self {
            years: (0..h).map(|t| problem.year(t)).collect(),
            m_at: ev.m[..h].iter().map(|m| 1000.0 * m[0]).collect(),
            m_uo: ev.m[..h].iter().map(|m| 1000.0 * m[1]).collect(),
            m_lo: ev.m[..h].iter().map(|m| 1000.0 * m[2]).collect(),
            t_at: ev.t[..h].iter().map(|t| t[0]).collect(),
            t_oc: ev.t[..h].iter().map(|t| t[1]).collect(),
            k: ev.k[..h].to_vec(),
            consumption: ev.consumption[..h].to_vec(),
            y_gross: ev.y_gross[..h].to_vec(),
            y_net: ev.y_net[..h].to_vec(),
            damage_frac: ev.damage_frac[..h].to_vec(),
            mu: ev.mu[..h].to_vec(),
            s: ev.s[..h].to_vec(),
            emissions: ev.emissions[..h].iter().map(|e| 1000.0 * e).collect(),
            scc: (0..h).map(|t| scc_at(t + 1)).collect(),
            carbon_tax: (0..h)
                .map(|t| exo.theta1[t] * theta2 * ev.mu[t].powf(theta2 - 1.0) / exo.sigma[t] / TON_C_PER_TON_CO2)
                .collect(),
            backstop: ev.mu[..h].iter().map(|m| *m >= BACKSTOP_MU).collect(),
            scc_state0: scc_at(0),
            converged,
        };
        tr.carbon_tax.iter_mut().for_each(|c| {
            if !c.is_finite() {
                *c = 0.0;
            }
        });
        Ok(tr)
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    /// Index of the period starting in `year`, if any.
    pub fn index_of(&self, year: f64) -> Option<usize> {
        self.years.iter().position(|y| *y == year)
    }

    /// Social cost of carbon of the period starting in `year`. Only defined on
    /// converged trajectories.
    pub fn scc_at(&self, year: f64) -> Result<Option<f64>, PolicyError> {
        if !self.converged {
            return Err(PolicyError::Unconverged);
        }
        Ok(self.index_of(year).map(|i| self.scc[i]))
    }

    /// Hottest period as `(year, temperature)`.
    pub fn peak_temperature(&self) -> (f64, f64) {
        self.t_at
            .iter()
            .enumerate()
            .fold((self.years[0], f64::NEG_INFINITY), |best, (i, t)| {
                if *t > best.1 {
                    (self.years[i], *t)
                } else {
                    best
                }
            })
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "year,m_at,m_uo,m_lo,t_at,t_oc,k,c,y_gross,y_net,damage_frac,mu,s,emissions,scc,carbon_tax,backstop\n",
        );
        for i in 0..self.len() {
            let row = [
                self.years[i],
                self.m_at[i],
                self.m_uo[i],
                self.m_lo[i],
                self.t_at[i],
                self.t_oc[i],
                self.k[i],
                self.consumption[i],
                self.y_gross[i],
                self.y_net[i],
                self.damage_frac[i],
                self.mu[i],
                self.s[i],
                self.emissions[i],
                self.scc[i],
                self.carbon_tax[i],
            ];
            for v in row {
                out.push_str(&v.to_string());
                out.push(',');
            }
            out.push_str(if self.backstop[i] { "1\n" } else { "0\n" });
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), PolicyError> {
        fs::write(path, self.to_csv_string()).map_err(|source| PolicyError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
