use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use cdice_core::calibrate::{carbon_eigen, ebm_timescales, fit_carbon, FitContext, FitOptions, FitTargets};
use cdice_core::drivers::{mass_to_concentration, BenchmarkSeries, DataDir, RcpId};
use cdice_core::econ::FexMode;
use cdice_core::policy::{
    grid, solve, sweep, PolicyConfig, PolicyError, PolicyProblem, Scenario, SolverOptions, SweepRow, Trajectory,
};
use cdice_core::scenarios::{abrupt_4xco2, pulse_100gtc, ramp_1pct, rcp_run, spin_up_1850, RcpMode, ResultTable};
use cdice_core::{ClimatePreset, PresetName};
use rayon::prelude::*;

use crate::chart::{render_chart, Chart};
use crate::config::{damage_name, fex_name, Settings};

const POLICY_PRESETS: [PresetName; 4] =
    [PresetName::Cdice, PresetName::Dice2016, PresetName::CdiceHadgem, PresetName::CdiceGiss];
const SWEEP_RHOS: [f64; 3] = [0.001, 0.015, 0.05];
const CHART_LAST_YEAR: f64 = 2300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchTest {
    Abrupt4x,
    Ramp1pct,
    Pulse,
    Rcp,
}

impl BenchTest {
    pub const ALL: [BenchTest; 4] = [BenchTest::Abrupt4x, BenchTest::Ramp1pct, BenchTest::Pulse, BenchTest::Rcp];

    fn id(self) -> &'static str {
        match self {
            BenchTest::Abrupt4x => "test1",
            BenchTest::Ramp1pct => "test2",
            BenchTest::Pulse => "test3",
            BenchTest::Rcp => "test4",
        }
    }
}

/// One line of the conformance report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub test: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn line(&self) -> String {
        format!("{} {} {}", if self.pass { "PASS" } else { "FAIL" }, self.test, self.detail)
    }
}

/// Everything a command produces, written in one place.
#[derive(Default)]
struct Artifacts {
    tables: Vec<(String, String)>,
    charts: Vec<(String, Chart)>,
    checks: Vec<Check>,
}

impl Artifacts {
    fn extend(&mut self, other: Artifacts) {
        self.tables.extend(other.tables);
        self.charts.extend(other.charts);
        self.checks.extend(other.checks);
    }
}

fn slug(p: PresetName) -> String {
    p.as_str().to_ascii_lowercase()
}

fn native_dt(p: &ClimatePreset<f64>) -> f64 {
    if p.dt_locked {
        p.native_dt as f64
    } else {
        1.0
    }
}

fn data_dir(s: &Settings) -> DataDir {
    s.data_dir.clone().map_or_else(DataDir::locate, DataDir::new)
}

fn write(s: &Settings, artifacts: &Artifacts) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&s.out_dir).with_context(|| format!("cannot create {}", s.out_dir.display()))?;
    let mut written = Vec::new();
    let mut put = |name: &str, text: &str| -> Result<()> {
        let path = s.out_dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    if s.format.csv() {
        for (name, csv) in &artifacts.tables {
            put(name, csv)?;
        }
    }
    if s.format.svg() {
        for (name, chart) in &artifacts.charts {
            put(name, &render_chart(chart)?)?;
        }
    }
    put("settings.toml", &s.to_toml()?)?;
    Ok(written)
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

fn envelope(series: &BenchmarkSeries, name: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let env = series.envelope.as_ref().ok_or_else(|| anyhow!("{} has no envelope columns", name))?;
    Ok((series.years.iter().map(|&y| y as f64).collect(), env.lower.clone(), env.upper.clone()))
}

fn bench_one(test: BenchTest, preset: &ClimatePreset<f64>, s: &Settings) -> Result<Artifacts> {
    let dt = s.dt.unwrap_or_else(|| native_dt(preset));
    let name = preset.name;
    let stem = format!("{}_{}", test.id(), slug(name));
    let fex = s.fex.unwrap_or_else(FexMode::proportional);
    let fixed_point = 2.0 * preset.temp.t_2xco2;
    let mut out = Artifacts::default();
    match test {
        BenchTest::Abrupt4x => {
            let horizon = s.horizon.unwrap_or(1000.0);
            let r = abrupt_4xco2(preset, horizon, dt)?;
            let end = *r.t_at.last().ok_or_else(|| anyhow!("empty run"))?;
            out.checks.push(Check {
                test: test.id(),
                pass: within(end, fixed_point, 0.025),
                detail: format!(
                    "{} abrupt 4xCO2: T_AT({}) {:.3} K vs fixed point {:.2} K (+-2.5%)",
                    name, horizon, end, fixed_point
                ),
            });
            out.charts.push((
                format!("{}.svg", stem),
                Chart::new(&format!("{} abrupt 4xCO2", name), "years", "temperature anomaly (K)")
                    .line("atmosphere", &r.years, &r.t_at)
                    .line("deep ocean", &r.years, &r.t_oc)
                    .line("2 x ECS", &[r.years[0], *r.years.last().unwrap()], &[fixed_point; 2]),
            ));
            out.tables.push((format!("{}.csv", stem), r.table().to_csv_string()));
        }
        BenchTest::Ramp1pct => {
            let r = ramp_1pct(preset, s.horizon.unwrap_or(140.0), dt)?;
            let tcr = r.tcr().ok_or_else(|| anyhow!("1% ramp needs at least 70 years"))?;
            let t140 = r.t_quadrupling().ok_or_else(|| anyhow!("1% ramp needs at least 140 years"))?;
            out.checks.push(Check {
                test: test.id(),
                pass: t140 < fixed_point,
                detail: format!(
                    "{} 1% ramp: TCR {:.3} K, T_AT(140) {:.3} K below 2 x ECS {:.2} K",
                    name, tcr, t140, fixed_point
                ),
            });
            out.charts.push((
                format!("{}.svg", stem),
                Chart::new(&format!("{} 1% CO2 ramp", name), "years", "temperature anomaly (K)")
                    .line("atmosphere", &r.years, &r.t_at)
                    .line("deep ocean", &r.years, &r.t_oc),
            ));
            out.tables.push((format!("{}.csv", stem), r.table().to_csv_string()));
        }
        BenchTest::Pulse => {
            let data = data_dir(s);
            let history = data.scenario(RcpId::Rcp85)?.emissions;
            let joos = data.pulse_response()?;
            let horizon = s.horizon.unwrap_or(100.0);
            let r = pulse_100gtc(preset, &history, fex, 100.0, horizon, dt)?;
            let mut outside = Vec::new();
            for &year in joos.years.iter().filter(|&&y| y > 0 && y as f64 <= horizon) {
                let (lo, hi) = joos.bounds_at(year as f64).ok_or_else(|| anyhow!("pulse envelope gap"))?;
                if let Some(f) = r.fraction_at(year as f64) {
                    if !(lo <= f && f <= hi) {
                        outside.push(year);
                    }
                }
            }
            let (peak_year, peak) = r.peak_anomaly();
            out.checks.push(Check {
                test: test.id(),
                pass: outside.is_empty(),
                detail: format!(
                    "{} 100 GtC pulse: airborne fraction outside envelope at years {:?}; peak warming {:.3} K at year {}",
                    name, outside, peak, peak_year
                ),
            });
            let (x, lo, hi) = envelope(&joos, "pulse response")?;
            let keep = x.iter().filter(|&&y| y <= horizon).count();
            out.charts.push((
                format!("{}.svg", stem),
                Chart::new(&format!("{} 100 GtC pulse", name), "years after pulse", "airborne fraction")
                    .line(name.as_str(), &r.years, &r.fraction)
                    .line("benchmark mean", &x[..keep], &joos.values[..keep])
                    .band("benchmark range", &x[..keep], &lo[..keep], &hi[..keep]),
            ));
            out.tables.push((format!("{}.csv", stem), r.table().to_csv_string()));
        }
        BenchTest::Rcp => {
            let data = data_dir(s);
            let mut table: Option<ResultTable> = None;
            let mut temperature = Chart::new(
                &format!("{} concentration-driven RCPs", name),
                "year",
                "temperature anomaly (K)",
            );
            let mut concentration = None;
            for id in RcpId::FUTURE {
                let inputs = data.scenario(id)?;
                let conc = rcp_run(preset, &inputs, RcpMode::Concentration, fex, dt)?;
                let emis = rcp_run(preset, &inputs, RcpMode::Emission, fex, dt)?;
                let cmip = data.temperature(id)?;
                let t = conc.t_at_in(2100).ok_or_else(|| anyhow!("{} run ends before 2100", id))?;
                let (lo, hi) = cmip.bounds_at(2100.0).ok_or_else(|| anyhow!("{} envelope has no 2100 value", id))?;
                out.checks.push(Check {
                    test: test.id(),
                    pass: lo <= t && t <= hi,
                    detail: format!("{} {} concentration-driven T_AT(2100) {:.2} K in [{:.2}, {:.2}]", name, id, t, lo, hi),
                });
                let got = emis.ppm_in(2100).ok_or_else(|| anyhow!("{} run ends before 2100", id))?;
                let want = emis.prescribed_ppm[emis.years.iter().position(|&y| y == 2100).unwrap()];
                out.checks.push(Check {
                    test: test.id(),
                    pass: within(got, want, 0.05),
                    detail: format!(
                        "{} {} emission-driven 2100 concentration {:.1} ppm vs {:.1} ({:+.1}%, +-5%)",
                        name,
                        id,
                        got,
                        want,
                        100.0 * (got / want - 1.0)
                    ),
                });
                let years: Vec<f64> = conc.years.iter().map(|&y| y as f64).collect();
                let stem_id = id.file_stem();
                let t = table.take().unwrap_or_else(|| ResultTable::new(years.clone()));
                if t.years != years {
                    bail!("{} runs on a different year axis", id);
                }
                table = Some(
                    t.with(&format!("{}_prescribed_ppm", stem_id), emis.prescribed_ppm.clone())
                        .with(&format!("{}_ppm", stem_id), emis.ppm.clone())
                        .with(&format!("{}_t_at_emission", stem_id), emis.t_at.clone())
                        .with(&format!("{}_t_at_concentration", stem_id), conc.t_at.clone()),
                );
                let (x, lo, hi) = envelope(&cmip, "CMIP5 temperature")?;
                temperature = temperature
                    .line(&id.to_string(), &years, &conc.t_at)
                    .band(&format!("{} CMIP5 range", id), &x, &lo, &hi);
                if id == RcpId::Rcp85 {
                    let p = &emis.prescribed_ppm;
                    let scaled = |f: f64| p.iter().map(|v| v * f).collect::<Vec<f64>>();
                    concentration = Some(
                        Chart::new(&format!("{} emission-driven RCP85", name), "year", "CO2 concentration (ppm)")
                            .line(name.as_str(), &years, &emis.ppm)
                            .line("prescribed", &years, p)
                            .band("+-20%", &years, &scaled(0.8), &scaled(1.2))
                            .band("+-5%", &years, &scaled(0.95), &scaled(1.05)),
                    );
                }
            }
            out.tables.push((
                format!("{}.csv", stem),
                table.ok_or_else(|| anyhow!("no RCP runs"))?.to_csv_string(),
            ));
            out.charts.push((format!("{}_temperature.svg", stem), temperature));
            if let Some(c) = concentration {
                out.charts.push((format!("{}_concentration.svg", stem), c));
            }
        }
    }
    Ok(out)
}

pub fn bench(tests: &[BenchTest], s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let preset = ClimatePreset::from_name(name);
    let results: Vec<Result<Artifacts>> = tests.par_iter().map(|&t| bench_one(t, &preset, s)).collect();
    let mut all = Artifacts::default();
    for r in results {
        all.extend(r?);
    }
    let mut summary = String::new();
    for c in &all.checks {
        let _ = writeln!(summary, "{}", c.line());
    }
    let passed = all.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(summary, "{}/{} checks passed for {}", passed, all.checks.len(), name);
    print!("{}", summary);
    let ids: Vec<&str> = tests.iter().map(|t| t.id()).collect();
    all.tables.push((format!("conformance_{}_{}.txt", ids.join("-"), slug(name)), summary));
    report(&write(s, &all)?);
    Ok(())
}

fn policy_config(s: &Settings, preset: PresetName, scenario: Scenario) -> PolicyConfig {
    let mut cfg = PolicyConfig {
        preset,
        scenario,
        horizon_years: s.horizon,
        ..PolicyConfig::default()
    };
    if let Some(rho) = s.rho {
        cfg.rho = rho;
    }
    if let Some(dt) = s.dt {
        cfg.dt = dt;
    }
    if let Some(d) = s.damage {
        cfg.damage = d;
    }
    if let Some(f) = s.fex {
        cfg.fex = f;
    }
    cfg
}

fn solver_options(s: &Settings) -> SolverOptions {
    let mut opts = SolverOptions::default();
    if let Some(n) = s.max_iterations {
        opts.max_iterations = n;
    }
    opts
}

fn head(tr: &Trajectory, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = tr.years.iter().take_while(|&&y| y <= CHART_LAST_YEAR).count();
    (tr.years[..n].to_vec(), values[..n].to_vec())
}

pub fn policy(scenario: Scenario, s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let cfg = policy_config(s, name, scenario);
    let problem = PolicyProblem::from_config(&cfg)?;
    let sol = solve(&problem, &solver_options(s))?;
    let tr = &sol.trajectory;
    let mode = match scenario {
        Scenario::Bau => "bau",
        Scenario::Optimal => "optimal",
    };
    let (peak_year, peak) = tr.peak_temperature();
    let fmt_opt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{:.2}", v));
    println!(
        "{} {} rho {} damage {} fex {}: SCC {} {} / 2020 {} USD/tC, peak T_AT {:.2} K in {}, {} iterations, residual {:.1e}",
        name,
        mode,
        cfg.rho,
        damage_name(cfg.damage),
        fex_name(cfg.fex),
        tr.years[0],
        fmt_opt(Some(tr.scc[0])),
        fmt_opt(tr.scc_at(2020.0)?),
        peak,
        peak_year,
        sol.iterations,
        sol.residual
    );
    let stem = format!("policy_{}_{}", mode, slug(name));
    let mut out = Artifacts::default();
    out.tables.push((format!("{}.csv", stem), tr.to_csv_string()));
    let (x, t_at) = head(tr, &tr.t_at);
    let (_, t_oc) = head(tr, &tr.t_oc);
    out.charts.push((
        format!("{}_temperature.svg", stem),
        Chart::new(&format!("{} {} temperature", name, mode), "year", "temperature anomaly (K)")
            .line("atmosphere", &x, &t_at)
            .line("deep ocean", &x, &t_oc),
    ));
    let (_, scc) = head(tr, &tr.scc);
    let (_, tax) = head(tr, &tr.carbon_tax);
    out.charts.push((
        format!("{}_scc.svg", stem),
        Chart::new(&format!("{} {} carbon price", name, mode), "year", "USD per ton of carbon")
            .line("social cost of carbon", &x, &scc)
            .line("carbon tax", &x, &tax),
    ));
    let (_, mu) = head(tr, &tr.mu);
    let (_, sav) = head(tr, &tr.s);
    out.charts.push((
        format!("{}_controls.svg", stem),
        Chart::new(&format!("{} {} controls", name, mode), "year", "rate")
            .line("abatement", &x, &mu)
            .line("savings", &x, &sav),
    ));
    report(&write(s, &out)?);
    Ok(())
}

pub fn policy_sweep(s: &Settings) -> Result<()> {
    let presets: Vec<PresetName> = s.preset.map_or_else(|| POLICY_PRESETS.to_vec(), |p| vec![p]);
    let rhos: Vec<f64> = s.rho.map_or_else(|| SWEEP_RHOS.to_vec(), |r| vec![r]);
    let base = policy_config(s, PresetName::Cdice, Scenario::Bau);
    let cells = grid(&presets, &rhos, &[base.damage], &[base.fex]);
    let rows = sweep(&base, &cells, &solver_options(s));
    let mut csv = format!("{}\n", SweepRow::CSV_HEADER);
    let mut ok = Vec::new();
    let mut failure: Option<anyhow::Error> = None;
    for (cell, row) in cells.iter().zip(rows) {
        match row {
            Ok(r) => {
                let _ = writeln!(csv, "{}", r.to_csv_line());
                println!(
                    "{} rho {}: SCC {:.2} USD/tC, peak T_AT {:.2} K in {}",
                    cell.preset, cell.rho, r.scc0, r.peak_temperature, r.peak_year
                );
                ok.push(r);
            }
            Err(e) => {
                eprintln!("{} rho {}: {}", cell.preset, cell.rho, e);
                let nonconvergent = matches!(e, PolicyError::NonConvergence { .. });
                if failure.is_none() || nonconvergent {
                    failure = Some(e.into());
                }
            }
        }
    }
    let mut out = Artifacts::default();
    out.tables.push(("policy_sweep.csv".to_string(), csv));
    let mut chart = Chart::new("Initial social cost of carbon", "rho", "USD per ton of carbon");
    for p in &presets {
        let pts: Vec<&SweepRow> = ok.iter().filter(|r| r.cell.preset == *p).collect();
        if !pts.is_empty() {
            let x: Vec<f64> = pts.iter().map(|r| r.cell.rho).collect();
            let y: Vec<f64> = pts.iter().map(|r| r.scc0).collect();
            chart = chart.line(p.as_str(), &x, &y);
        }
    }
    if !chart.series.is_empty() {
        out.charts.push(("policy_sweep.svg".to_string(), chart));
    }
    report(&write(s, &out)?);
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn calibrate_eigen(s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let p = ClimatePreset::from_name(name);
    let e = carbon_eigen(&p.carbon, p.coeff_period as f64)?;
    let life = |h: Option<f64>| h.map_or_else(|| "inf".to_string(), |v| format!("{:.1}", v));
    println!(
        "{} transfer matrix eigenvalues {:.4} {:.4} {:.4}; half-lives {} and {} years",
        name,
        e.eigenvalues[0],
        e.eigenvalues[1],
        e.eigenvalues[2],
        life(e.half_lives[0]),
        life(e.half_lives[1])
    );
    let mut csv = String::from("mode,eigenvalue,half_life_years\n");
    let _ = writeln!(csv, "conserved,{},inf", e.eigenvalues[0]);
    for (k, mode) in ["fast", "slow"].iter().enumerate() {
        let h = e.half_lives[k].map_or_else(|| "inf".to_string(), |v| v.to_string());
        let _ = writeln!(csv, "{},{},{}", mode, e.eigenvalues[k + 1], h);
    }
    let out = Artifacts {
        tables: vec![(format!("eigen_{}.csv", slug(name)), csv)],
        ..Default::default()
    };
    report(&write(s, &out)?);
    Ok(())
}

pub fn calibrate_timescales(s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let p = ClimatePreset::from_name(name);
    let t = ebm_timescales(&p.temp, p.coeff_period as f64)?;
    println!("{} temperature response timescales: fast {:.1} years, slow {:.1} years", name, t.fast, t.slow);
    let out = Artifacts {
        tables: vec![(
            format!("timescales_{}.csv", slug(name)),
            format!("mode,years\nfast,{}\nslow,{}\n", t.fast, t.slow),
        )],
        ..Default::default()
    };
    report(&write(s, &out)?);
    Ok(())
}

pub fn calibrate_fit(s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let base = ClimatePreset::from_name(name);
    let data = data_dir(s);
    let conc_2100 = |id: RcpId| -> Result<f64> {
        data.concentration(id)?
            .value_at(2100.0)
            .ok_or_else(|| anyhow!("{} concentration has no 2100 value", id))
    };
    let joos = data.pulse_response()?;
    let targets = FitTargets {
        pulse: joos
            .years
            .iter()
            .zip(&joos.values)
            .filter(|(y, _)| **y > 0 && **y <= 500)
            .map(|(y, v)| (*y as f64, *v))
            .collect(),
        rcp26_2100: Some(conc_2100(RcpId::Rcp26)?),
        rcp85_2100: Some(conc_2100(RcpId::Rcp85)?),
        pulse_weight: 1.0,
        rcp_weight: 1.0,
    };
    let ctx = FitContext {
        base,
        history: data.scenario(RcpId::Rcp85)?.emissions,
        rcp26: data.scenario(RcpId::Rcp26)?,
        rcp85: data.scenario(RcpId::Rcp85)?,
        dt: s.dt.unwrap_or(1.0),
    };
    let rep = fit_carbon(&ctx.base.annual_carbon(), &targets, &ctx, &FitOptions::default())?;
    print!("{}", rep.summary());
    let evals: Vec<f64> = (0..rep.trace.len()).map(|k| k as f64).collect();
    let out = Artifacts {
        tables: vec![(format!("fit_{}.csv", slug(name)), rep.to_csv_string())],
        charts: vec![(
            format!("fit_{}.svg", slug(name)),
            Chart::new(&format!("{} carbon-cycle fit", name), "accepted move", "objective").line(
                "objective",
                &evals,
                &rep.trace,
            ),
        )],
        checks: Vec::new(),
    };
    report(&write(s, &out)?);
    Ok(())
}

pub fn spinup(target_ppm: f64, s: &Settings) -> Result<()> {
    let name = s.preset_or(PresetName::Cdice);
    let p = ClimatePreset::from_name(name);
    let history = data_dir(s).scenario(RcpId::Rcp85)?.emissions;
    let dt = s.dt.unwrap_or_else(|| native_dt(&p));
    let r = spin_up_1850(&p, &history, s.fex.unwrap_or_else(FexMode::proportional), target_ppm, dt)?;
    let m = r.state.m;
    println!(
        "{} reaches {:.1} ppm in {}: M = ({:.1}, {:.1}, {:.1}) GtC, T = ({:.3}, {:.3}) K",
        name,
        r.ppm,
        r.year,
        1000.0 * m.at,
        1000.0 * m.uo,
        1000.0 * m.lo,
        r.state.t.at,
        r.state.t.oc
    );
    debug_assert!((mass_to_concentration(m.at) - r.ppm).abs() < 1e-9);
    let csv = format!(
        "year,ppm,m_at,m_uo,m_lo,t_at,t_oc\n{},{},{},{},{},{},{}\n",
        r.year,
        r.ppm,
        1000.0 * m.at,
        1000.0 * m.uo,
        1000.0 * m.lo,
        r.state.t.at,
        r.state.t.oc
    );
    let out = Artifacts {
        tables: vec![(format!("spinup_{}.csv", slug(name)), csv)],
        ..Default::default()
    };
    report(&write(s, &out)?);
    Ok(())
}
