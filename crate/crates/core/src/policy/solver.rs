use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{evaluate, PolicyError, PolicyProblem, Scenario, Trajectory};

/// Settings of the projected L-BFGS solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Bound on the projected-gradient residual `max |x - P(x - D g)|`, where
    /// `D` rescales each control's gradient by the inverse of its periods'
    /// discounted marginal value of output.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Number of stored curvature pairs.
    pub memory: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 20_000,
            memory: 20,
        }
    }
}

/// Converged controls with their trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Abatement for each decision period followed by savings.
    pub controls: Vec<f64>,
    pub welfare: f64,
    /// Welfare unit used to scale the objective: marginal utility times net
    /// output in period 0 of the initial guess.
    pub scale: f64,
    pub iterations: usize,
    pub residual: f64,
    pub trajectory: Trajectory,
}

fn project(x: &mut [f64], lo: &[f64], up: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], up[i]);
    }
}

fn residual(x: &[f64], g: &[f64], diag: &[f64], lo: &[f64], up: &[f64]) -> f64 {
    (0..x.len())
        .map(|i| (x[i] - (x[i] - diag[i] * g[i]).clamp(lo[i], up[i])).abs())
        .fold(0.0, f64::max)
}

fn dot_masked(a: &[f64], b: &[f64], free: &[bool]) -> f64 {
    a.iter()
        .zip(b)
        .zip(free)
        .filter(|(_, f)| **f)
        .map(|((x, y), _)| x * y)
        .sum()
}

/// Diagonal inverse-curvature estimate. Savings rows use the discounted
/// marginal value of output in each control's periods, relative to period 0;
/// abatement rows additionally scale by the abatement cost coefficient.
fn preconditioner(problem: &PolicyProblem, x: &[f64]) -> Result<(Vec<f64>, f64), PolicyError> {
    let ev = evaluate(problem, x, false)?;
    let h = problem.horizon;
    let base = ev.marginal_utility[0] * ev.y_net[0];
    let mut output = vec![0.0; h];
    let mut cost = vec![0.0; h];
    for t in 0..problem.periods() {
        let w = problem.weight(t) * ev.marginal_utility[t] * ev.y_gross[t] / base;
        output[t.min(h - 1)] += w * ev.y_net[t] / ev.y_gross[t];
        cost[t.min(h - 1)] += w * problem.exo.theta1[t];
    }
    let d = cost
        .iter()
        .chain(&output)
        .map(|w| 1.0 / w.max(1e-300))
        .collect();
    Ok((d, base))
}

/// Result of [`minimize_box`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Projected L-BFGS on the box `[lower, upper]`.
///
/// `objective` returns the value and gradient, or `None` where the objective
/// is undefined; such points are rejected by the line search. `diag` is a
/// positive diagonal estimate of the inverse Hessian; it also scales the
/// gradient in the stopping residual.
pub fn minimize_box<F>(
    objective: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    diag: &[f64],
    opts: &SolverOptions,
) -> Result<BoxMinimum, PolicyError>
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let (lo, up) = (lower, upper);
    let mut x = x0.to_vec();
    project(&mut x, lo, up);
    let (mut f, mut g) =
        objective(&x).ok_or_else(|| PolicyError::Infeasible("initial guess is infeasible".into()))?;
    let n = x.len();
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut res = residual(&x, &g, diag, lo, up);
    let mut stalled = false;
    while res > opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        let free: Vec<bool> = (0..n)
            .map(|i| !(lo[i] == up[i] || (x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= up[i] && g[i] < 0.0)))
            .collect();

        let mut q: Vec<f64> = (0..n).map(|i| if free[i] { g[i] } else { 0.0 }).collect();
        let mut alphas = Vec::with_capacity(pairs.len());
        for (s, y, rho) in pairs.iter().rev() {
            let a = rho * dot_masked(s, &q, &free);
            for i in 0..n {
                if free[i] {
                    q[i] -= a * y[i];
                }
            }
            alphas.push(a);
        }
        let gamma = pairs.back().map_or(1.0, |(s, y, _)| {
            let dy: f64 = (0..n).filter(|i| free[*i]).map(|i| y[i] * diag[i] * y[i]).sum();
            let sy = dot_masked(s, y, &free);
            if dy > 0.0 && sy > 0.0 {
                sy / dy
            } else {
                1.0
            }
        });
        for i in 0..n {
            q[i] *= gamma * diag[i];
        }
        for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
            let b = rho * dot_masked(y, &q, &free);
            for i in 0..n {
                if free[i] {
                    q[i] += (a - b) * s[i];
                }
            }
        }
        let mut d: Vec<f64> = (0..n).map(|i| if free[i] { -q[i] } else { 0.0 }).collect();
        if dot_masked(&d, &g, &free) >= 0.0 {
            pairs.clear();
            d = (0..n).map(|i| if free[i] { -diag[i] * g[i] } else { 0.0 }).collect();
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial: Vec<f64> = (0..n).map(|i| x[i] + step * d[i]).collect();
            project(&mut trial, lo, up);
            let decrease: f64 = (0..n).map(|i| g[i] * (trial[i] - x[i])).sum();
            if decrease < 0.0 {
                if let Some((ft, gt)) = objective(&trial) {
                    if ft <= f + 1e-4 * decrease {
                        accepted = Some((trial, ft, gt));
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((xn, fnew, gn)) => {
                let s: Vec<f64> = (0..n).map(|i| xn[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| gn[i] - g[i]).collect();
                let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
                let norms = s.iter().map(|v| v * v).sum::<f64>().sqrt() * y.iter().map(|v| v * v).sum::<f64>().sqrt();
                if sy > 1e-14 * norms {
                    if pairs.len() == opts.memory {
                        pairs.pop_front();
                    }
                    pairs.push_back((s, y, 1.0 / sy));
                }
                x = xn;
                f = fnew;
                g = gn;
                res = residual(&x, &g, diag, lo, up);
                stalled = false;
            }
            None if !pairs.is_empty() && !stalled => {
                pairs.clear();
                stalled = true;
            }
            None => break,
        }
    }
    if res > opts.tolerance {
        return Err(PolicyError::NonConvergence {
            iterations,
            residual: res,
        });
    }
    Ok(BoxMinimum {
        x,
        value: f,
        iterations,
        residual: res,
    })
}

/// Maximizes welfare over the control box, starting from `x0`.
pub fn solve_from(problem: &PolicyProblem, x0: &[f64], opts: &SolverOptions) -> Result<Solution, PolicyError> {
    let lo = problem.lower();
    let up = problem.upper();
    let mut start = x0.to_vec();
    project(&mut start, &lo, &up);
    let (diag, scale) = preconditioner(problem, &start)?;
    let objective = |x: &[f64]| {
        let ev = evaluate(problem, x, true).ok()?;
        let g = ev.gradient.iter().map(|v| -v / scale).collect();
        Some((-ev.welfare / scale, g))
    };
    let min = minimize_box(objective, &start, &lo, &up, &diag, opts)?;
    let trajectory = Trajectory::build(problem, &min.x, true)?;
    Ok(Solution {
        welfare: -min.value * scale,
        controls: min.x,
        scale,
        iterations: min.iterations,
        residual: min.residual,
        trajectory,
    })
}

/// Solves from the default initial guess.
pub fn solve(problem: &PolicyProblem, opts: &SolverOptions) -> Result<Solution, PolicyError> {
    solve_from(problem, &problem.initial_guess(), opts)
}

/// Savings-only optimum with abatement held at zero.
pub fn solve_bau(problem: &PolicyProblem, opts: &SolverOptions) -> Result<Solution, PolicyError> {
    solve(&problem.with_scenario(Scenario::Bau), opts)
}

/// Joint optimum over abatement and savings.
pub fn solve_optimal(problem: &PolicyProblem, opts: &SolverOptions) -> Result<Solution, PolicyError> {
    solve(&problem.with_scenario(Scenario::Optimal), opts)
}
