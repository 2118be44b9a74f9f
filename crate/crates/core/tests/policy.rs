use cdice_core::econ::{gross_output, period_utility};
use cdice_core::policy::{
    evaluate, solve, solve_from, DamageChoice, PolicyConfig, PolicyProblem, Scenario, Solution, SolverOptions,
    TON_C_PER_TON_CO2,
};
use cdice_core::{CarbonMass, ClimateState, PresetName, Temperature};
use proptest::prelude::*;

fn config(preset: PresetName, scenario: Scenario) -> PolicyConfig {
    PolicyConfig {
        preset,
        scenario,
        ..PolicyConfig::default()
    }
}

fn tight() -> SolverOptions {
    SolverOptions {
        tolerance: 1e-10,
        ..SolverOptions::default()
    }
}

fn solved(cfg: &PolicyConfig) -> Solution {
    let p = PolicyProblem::from_config(cfg).unwrap();
    solve(&p, &SolverOptions::default()).unwrap()
}

fn short_problem(preset: PresetName) -> PolicyProblem {
    PolicyProblem::from_config(&PolicyConfig {
        preset,
        horizon_years: Some(500.0),
        continuation_years: 100.0,
        ..PolicyConfig::default()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn gradient_matches_central_differences_at_random_points(
        mu in prop::collection::vec(0.05f64..0.95, 500),
        s in prop::collection::vec(0.15f64..0.35, 500),
        dir in prop::collection::vec(-1.0f64..1.0, 1000),
    ) {
        let p = short_problem(PresetName::Cdice);
        let x: Vec<f64> = mu.into_iter().chain(s).collect();
        let ev = evaluate(&p, &x, true).unwrap();
        let analytic: f64 = ev.gradient.iter().zip(&dir).map(|(g, d)| g * d).sum();
        let h = 1e-5;
        let shifted = |sign: f64| {
            let xs: Vec<f64> = x.iter().zip(&dir).map(|(v, d)| v + sign * h * d).collect();
            evaluate(&p, &xs, false).unwrap().welfare
        };
        let fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
        prop_assert!((fd - analytic).abs() <= 1e-5 * analytic.abs(), "{} vs {}", analytic, fd);
    }
}

#[test]
fn costate_scc_matches_reoptimized_differences() {
    let base = PolicyProblem::from_config(&config(PresetName::Cdice, Scenario::Bau)).unwrap();
    let sol = solve(&base, &tight()).unwrap();
    let value = |p: &PolicyProblem| solve_from(p, &sol.controls, &tight()).unwrap().welfare;

    let dm = 1e-3;
    let mut hi = base.clone();
    hi.climate0.m.at += dm;
    let mut lo = base.clone();
    lo.climate0.m.at -= dm;
    let dv_dm = (value(&hi) - value(&lo)) / (2.0 * dm);

    let dk = 1e-3 * base.k0;
    let mut hi = base.clone();
    hi.k0 += dk;
    let mut lo = base.clone();
    lo.k0 -= dk;
    let dv_dk = (value(&hi) - value(&lo)) / (2.0 * dk);

    let fd = -dv_dm / dv_dk / TON_C_PER_TON_CO2;
    let costate = sol.trajectory.scc_state0;
    assert!(((fd - costate) / costate).abs() <= 1e-3, "costate {} vs fd {}", costate, fd);
}

#[test]
fn restart_from_year_50_reproduces_tail() {
    let p = PolicyProblem::from_config(&config(PresetName::Cdice, Scenario::Optimal)).unwrap();
    let sol = solve(&p, &tight()).unwrap();
    let ev = evaluate(&p, &sol.controls, false).unwrap();
    let state = ClimateState {
        m: CarbonMass::from_array(ev.m[50]),
        t: Temperature {
            at: ev.t[50][0],
            oc: ev.t[50][1],
        },
    };
    let tail = p.restarted(50, ev.k[50], state).unwrap();
    let re = solve(&tail, &tight()).unwrap();
    let h = p.horizon;
    for t in 0..100 {
        assert!((re.controls[t] - sol.controls[50 + t]).abs() < 1e-5, "mu {}", t);
        assert!((re.controls[tail.horizon + t] - sol.controls[h + 50 + t]).abs() < 1e-5, "s {}", t);
    }
    let scc = re.trajectory.scc[0];
    assert!((scc - sol.trajectory.scc[50]).abs() < 1e-4 * scc);
}

#[test]
fn longer_horizon_barely_moves_scc() {
    for (rho, years) in [(0.015, 600.0), (0.05, 600.0), (0.001, 1000.0)] {
        let cfg = PolicyConfig {
            rho,
            ..config(PresetName::Cdice, Scenario::Bau)
        };
        let short = solved(&cfg).trajectory.scc[0];
        let long = solved(&PolicyConfig {
            horizon_years: Some(years + 100.0),
            ..cfg
        })
        .trajectory
        .scc[0];
        assert!(((long - short) / short).abs() < 0.005, "rho {}: {} vs {}", rho, short, long);
    }
}

#[test]
fn single_control_perturbations_do_not_improve() {
    let p = PolicyProblem::from_config(&config(PresetName::Cdice, Scenario::Optimal)).unwrap();
    let sol = solve(&p, &SolverOptions::default()).unwrap();
    let (lo, up) = (p.lower(), p.upper());
    let objective = |x: &[f64]| -evaluate(&p, x, false).unwrap().welfare / sol.scale;
    let best = objective(&sol.controls);
    for i in [0usize, 1, 10, 50, 100, 300, 599, 600, 601, 650, 900, 1199] {
        for step in [1e-4, -1e-4] {
            let mut x = sol.controls.clone();
            x[i] = (x[i] + step).clamp(lo[i], up[i]);
            assert!(objective(&x) >= best - 1e-8, "control {} step {}", i, step);
        }
    }
}

#[test]
fn carbon_tax_equals_scc_where_interior() {
    let sol = solved(&config(PresetName::Cdice, Scenario::Optimal));
    let tr = &sol.trajectory;
    let mut interior = 0;
    for t in 0..tr.len() {
        if tr.mu[t] <= 0.99 {
            interior += 1;
            assert!(((tr.carbon_tax[t] - tr.scc[t]) / tr.scc[t]).abs() <= 0.01, "period {}", t);
        }
        assert_eq!(tr.backstop[t], tr.mu[t] >= 0.99);
    }
    assert!(interior > 50);
}

#[test]
fn zero_damages_mean_no_abatement_and_no_scc() {
    let sol = solved(&PolicyConfig {
        damage: DamageChoice::Zero,
        ..config(PresetName::Cdice, Scenario::Optimal)
    });
    let tr = &sol.trajectory;
    assert!(tr.mu.iter().all(|m| *m < 1e-3));
    assert!(tr.carbon_tax.iter().all(|c| *c < 1e-3));
    assert!(tr.scc.iter().all(|s| s.abs() < 1e-12));
    let p = PolicyProblem::from_config(&PolicyConfig {
        damage: DamageChoice::Zero,
        ..config(PresetName::Cdice, Scenario::Optimal)
    })
    .unwrap();
    let mut none = sol.controls.clone();
    none[..p.horizon].iter_mut().for_each(|m| *m = 0.0);
    assert!(evaluate(&p, &none, false).unwrap().welfare >= sol.welfare);
}

#[test]
fn scc_falls_with_discount_rate() {
    let scc = |rho| {
        solved(&PolicyConfig {
            rho,
            ..config(PresetName::Cdice, Scenario::Bau)
        })
        .trajectory
        .scc[0]
    };
    let (low, mid, high) = (scc(0.001), scc(0.015), scc(0.05));
    assert!(low > mid && mid > high, "{} {} {}", low, mid, high);
}

#[test]
fn scc_rises_with_climate_sensitivity() {
    let scc = |preset| solved(&config(preset, Scenario::Bau)).trajectory.scc[0];
    let (giss, mmm, hadgem) = (
        scc(PresetName::CdiceGiss),
        scc(PresetName::Cdice),
        scc(PresetName::CdiceHadgem),
    );
    assert!(giss < mmm && mmm < hadgem, "{} {} {}", giss, mmm, hadgem);
}

#[test]
fn bau_paths() {
    let cdice = solved(&config(PresetName::Cdice, Scenario::Bau)).trajectory;
    let dice = solved(&config(PresetName::Dice2016, Scenario::Bau)).trajectory;
    let end = cdice.index_of(2300.0).unwrap();
    assert!(cdice.t_at[..=end].windows(2).all(|w| w[1] > w[0]));
    assert!(cdice.mu.iter().all(|m| *m == 0.0));
    let i = cdice.index_of(2100.0).unwrap();
    assert!(dice.m_at[i] > cdice.m_at[i]);
    let emissions_gap = (dice.emissions[i] - cdice.emissions[i]).abs() / cdice.emissions[i];
    assert!(emissions_gap < 0.05, "{}", emissions_gap);
}

#[test]
fn optimal_cdice_is_cooler_than_bau_after_2050() {
    let bau = solved(&config(PresetName::Cdice, Scenario::Bau)).trajectory;
    let opt = solved(&config(PresetName::Cdice, Scenario::Optimal)).trajectory;
    let from = bau.index_of(2051.0).unwrap();
    assert!((from..bau.len()).all(|t| opt.t_at[t] < bau.t_at[t]));
}

/// Stationary growth model solved by value iteration on a capital grid, with
/// linear interpolation of the value function and golden-section search over
/// next-period capital.
struct ValueIteration {
    grid: Vec<f64>,
    value: Vec<f64>,
}

impl ValueIteration {
    fn interp(&self, k: f64) -> f64 {
        let g = &self.grid;
        let step = g[1] - g[0];
        let i = (((k - g[0]) / step).floor() as usize).min(g.len() - 2);
        let w = (k - g[i]) / step;
        (1.0 - w) * self.value[i] + w * self.value[i + 1]
    }

    fn best(&self, k: f64, p: &PolicyProblem) -> (f64, f64) {
        let y = gross_output(k, 0, &p.econ, &p.exo).unwrap();
        let keep = (1.0 - p.econ.delta_k) * k;
        let l = p.exo.labor[0];
        let beta = p.beta();
        let lo_k = keep.max(self.grid[0]);
        let hi_k = (keep + 0.95 * y).min(*self.grid.last().unwrap());
        let f = |kn: f64| period_utility(y - (kn - keep), l, &p.econ) + beta * self.interp(kn);
        let (mut a, mut b) = (lo_k, hi_k);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
        let (mut fc, mut fd) = (f(c), f(d));
        while b - a > 1e-9 * k {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = f(d);
            }
        }
        let kn = 0.5 * (a + b);
        (f(kn), (kn - keep) / y)
    }
}

#[test]
fn bau_savings_match_value_iteration_oracle() {
    let mut p = PolicyProblem::from_config(&PolicyConfig {
        damage: DamageChoice::Zero,
        ..config(PresetName::Cdice, Scenario::Bau)
    })
    .unwrap();
    let n = p.periods();
    let (l0, a0) = (p.exo.labor[0], p.exo.tfp[0]);
    p.exo.labor = vec![l0; n];
    p.exo.tfp = vec![a0; n];
    let sol = solve(&p, &SolverOptions::default()).unwrap();
    let tr = &sol.trajectory;

    let k_max = tr.k[..200].iter().cloned().fold(0.0, f64::max);
    let k_min = tr.k[..200].iter().cloned().fold(f64::INFINITY, f64::min);
    let lo = 0.7 * k_min;
    let hi = 1.3 * k_max;
    let points = 400;
    let grid: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let mut vi = ValueIteration {
        value: vec![0.0; points],
        grid,
    };
    for _ in 0..5000 {
        let next: Vec<f64> = vi.grid.iter().map(|k| vi.best(*k, &p).0).collect();
        let change = next.iter().zip(&vi.value).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        vi.value = next;
        if change < 1e-8 * vi.value[0].abs() {
            break;
        }
    }
    for t in [0usize, 1, 5, 20, 50, 100, 200] {
        let s_vi = vi.best(tr.k[t], &p).1;
        assert!(((tr.s[t] - s_vi) / s_vi).abs() < 0.01, "period {}: {} vs {}", t, tr.s[t], s_vi);
    }
}
