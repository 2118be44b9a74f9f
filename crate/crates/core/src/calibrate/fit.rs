use std::cell::Cell;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{carbon_eigen, CalibrateError};
use crate::climate::{CarbonMass, CarbonParams, ClimatePreset};
use crate::drivers::ScenarioInputs;
use crate::scenarios::{pulse_100gtc, rcp_run, ForcingMode, RcpMode};

/// Benchmark values the carbon cycle is fitted against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitTargets {
    /// Years since the pulse and the remaining airborne fraction.
    pub pulse: Vec<(f64, f64)>,
    /// Prescribed 2100 concentration for the low pathway, ppm.
    pub rcp26_2100: Option<f64>,
    /// Prescribed 2100 concentration for the high pathway, ppm.
    pub rcp85_2100: Option<f64>,
    pub pulse_weight: f64,
    pub rcp_weight: f64,
}

/// Inputs needed to evaluate the benchmark responses of a candidate.
#[derive(Debug, Clone)]
pub struct FitContext {
    /// Supplies temperature parameters, the forcing baseline and the step.
    pub base: ClimatePreset<f64>,
    /// Annual emissions from 1850 driving the pulse-protocol history.
    pub history: Vec<f64>,
    pub rcp26: ScenarioInputs,
    pub rcp85: ScenarioInputs,
    pub dt: f64,
}

/// Positive box bounds for b12, b23, M_EQ^UO and M_EQ^LO, in per-year units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitBounds {
    pub lower: [f64; 4],
    pub upper: [f64; 4],
}

impl Default for FitBounds {
    fn default() -> Self {
        Self {
            lower: [1e-4, 1e-5, 0.05, 0.1],
            upper: [0.5, 0.1, 20.0, 200.0],
        }
    }
}

/// Coordinate-search settings. The search stops when the log-space step
/// falls below `min_step` or after `max_evals` objective evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    pub bounds: FitBounds,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            min_step: 1e-7,
            max_evals: 20_000,
            bounds: FitBounds::default(),
        }
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub initial: CarbonParams<f64>,
    pub fitted: CarbonParams<f64>,
    pub objective_before: f64,
    pub objective_after: f64,
    pub evaluations: usize,
    /// Best objective after each sweep over the coordinates.
    pub trace: Vec<f64>,
    pub half_lives_before: [Option<f64>; 2],
    pub half_lives_after: [Option<f64>; 2],
}

const NAMES: [&str; 4] = ["b12", "b23", "m_eq_uo", "m_eq_lo"];

fn unpack(x: &[f64; 4], m_at: f64) -> Result<CarbonParams<f64>, CalibrateError> {
    Ok(CarbonParams::new(
        x[0].exp(),
        x[1].exp(),
        CarbonMass::new(m_at, x[2].exp(), x[3].exp()),
    )?)
}

impl FitContext {
    fn preset_with(&self, carbon: CarbonParams<f64>) -> ClimatePreset<f64> {
        let mut p = self.base.unlocked();
        p.carbon = carbon;
        p
    }

    /// Weighted squared deviation of the responses from the targets.
    pub fn objective(&self, carbon: &CarbonParams<f64>, targets: &FitTargets) -> Result<f64, CalibrateError> {
        let preset = self.preset_with(*carbon);
        let mut total = 0.0;
        if targets.pulse_weight != 0.0 && !targets.pulse.is_empty() {
            let horizon = targets.pulse.iter().map(|p| p.0).fold(0.0, f64::max);
            let horizon = (horizon / self.dt).ceil().max(1.0) * self.dt;
            let r = pulse_100gtc(&preset, &self.history, ForcingMode::proportional(), 100.0, horizon, self.dt)?;
            let sse: f64 = targets
                .pulse
                .iter()
                .map(|(year, want)| {
                    let k = (year / self.dt).round() as usize;
                    (r.fraction[k] - want).powi(2)
                })
                .sum();
            total += targets.pulse_weight * sse / targets.pulse.len() as f64;
        }
        if targets.rcp_weight != 0.0 {
            let mut terms = Vec::new();
            for (want, inputs) in [(targets.rcp26_2100, &self.rcp26), (targets.rcp85_2100, &self.rcp85)] {
                if let Some(want) = want {
                    let r = rcp_run(&preset, inputs, RcpMode::Emission, ForcingMode::proportional(), self.dt)?;
                    let got = *r.ppm.last().expect("run has states");
                    terms.push((got / want - 1.0).powi(2));
                }
            }
            if !terms.is_empty() {
                total += targets.rcp_weight * terms.iter().sum::<f64>() / terms.len() as f64;
            }
        }
        Ok(total)
    }
}

/// Fits b12, b23, M_EQ^UO and M_EQ^LO (per-year units) by a bounded
/// coordinate search in log space. M_EQ^AT stays fixed. Every accepted move
/// strictly lowers the objective; candidates that are unstable or fail to
/// evaluate are rejected.
pub fn fit_carbon(
    initial: &CarbonParams<f64>,
    targets: &FitTargets,
    ctx: &FitContext,
    opts: &FitOptions,
) -> Result<FitReport, CalibrateError> {
    initial.validate()?;
    let start = [initial.b12, initial.b23, initial.m_eq.uo, initial.m_eq.lo];
    for k in 0..4 {
        let (lo, up) = (opts.bounds.lower[k], opts.bounds.upper[k]);
        if !(lo > 0.0 && lo <= up && start[k] >= lo && start[k] <= up) {
            return Err(CalibrateError::InfeasibleBounds {
                name: NAMES[k],
                lower: lo,
                upper: up,
                start: start[k],
            });
        }
    }
    let m_at = initial.m_eq.at;
    let lower = opts.bounds.lower.map(f64::ln);
    let upper = opts.bounds.upper.map(f64::ln);
    let evals = Cell::new(0usize);
    let eval = |x: &[f64; 4]| -> f64 {
        evals.set(evals.get() + 1);
        unpack(x, m_at)
            .and_then(|p| {
                p.check_step(ctx.dt)?;
                ctx.objective(&p, targets)
            })
            .unwrap_or(f64::INFINITY)
    };

    let mut x = start.map(f64::ln);
    let f0 = eval(&x);
    if !f0.is_finite() {
        return Err(CalibrateError::NonFiniteObjective);
    }
    let mut best = f0;
    let mut step = opts.initial_step;
    let mut trace = vec![f0];
    while step >= opts.min_step && evals.get() < opts.max_evals {
        let mut improved = false;
        for k in 0..4 {
            for dir in [1.0, -1.0] {
                let mut cand = x;
                cand[k] = (x[k] + dir * step).clamp(lower[k], upper[k]);
                if cand[k] == x[k] {
                    continue;
                }
                let f = eval(&cand);
                if f < best {
                    // keep moving while it pays off
                    let mut reach = cand;
                    let mut f_reach = f;
                    loop {
                        let mut further = reach;
                        further[k] = (reach[k] + dir * step).clamp(lower[k], upper[k]);
                        if further[k] == reach[k] || evals.get() >= opts.max_evals {
                            break;
                        }
                        let g = eval(&further);
                        if g < f_reach {
                            reach = further;
                            f_reach = g;
                        } else {
                            break;
                        }
                    }
                    x = reach;
                    best = f_reach;
                    improved = true;
                    break;
                }
            }
        }
        trace.push(best);
        if !improved {
            step *= 0.5;
        }
    }

    let fitted = if best < f0 { unpack(&x, m_at)? } else { *initial };
    let before = carbon_eigen(initial, 1.0)?;
    let after = carbon_eigen(&fitted, 1.0)?;
    Ok(FitReport {
        initial: *initial,
        fitted,
        objective_before: f0,
        objective_after: best,
        evaluations: evals.get(),
        trace,
        half_lives_before: before.half_lives,
        half_lives_after: after.half_lives,
    })
}

fn fmt_half_life(h: Option<f64>) -> String {
    h.map_or_else(|| "inf".to_string(), |v| format!("{:.1}", v))
}

impl FitReport {
    /// Columns `parameter,initial,fitted`.
    pub fn to_csv_string(&self) -> String {
        let rows = [
            ("b12", self.initial.b12, self.fitted.b12),
            ("b23", self.initial.b23, self.fitted.b23),
            ("m_eq_at", self.initial.m_eq.at, self.fitted.m_eq.at),
            ("m_eq_uo", self.initial.m_eq.uo, self.fitted.m_eq.uo),
            ("m_eq_lo", self.initial.m_eq.lo, self.fitted.m_eq.lo),
            ("objective", self.objective_before, self.objective_after),
        ];
        let mut out = String::from("parameter,initial,fitted\n");
        for (name, a, b) in rows {
            let _ = writeln!(out, "{},{},{}", name, a, b);
        }
        for (k, label) in ["half_life_fast", "half_life_slow"].iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                label,
                fmt_half_life(self.half_lives_before[k]),
                fmt_half_life(self.half_lives_after[k])
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "carbon fit: objective {:.3e} -> {:.3e} in {} evaluations\n\
             b12 {:.5} -> {:.5}, b23 {:.6} -> {:.6}\n\
             M_EQ upper ocean {:.4} -> {:.4}, lower ocean {:.4} -> {:.4}\n\
             half-lives ({}, {}) -> ({}, {}) years\n",
            self.objective_before,
            self.objective_after,
            self.evaluations,
            self.initial.b12,
            self.fitted.b12,
            self.initial.b23,
            self.fitted.b23,
            self.initial.m_eq.uo,
            self.fitted.m_eq.uo,
            self.initial.m_eq.lo,
            self.fitted.m_eq.lo,
            fmt_half_life(self.half_lives_before[0]),
            fmt_half_life(self.half_lives_before[1]),
            fmt_half_life(self.half_lives_after[0]),
            fmt_half_life(self.half_lives_after[1]),
        )
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CalibrateError> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| CalibrateError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
