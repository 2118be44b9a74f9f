use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve, DamageChoice, PolicyConfig, PolicyError, PolicyProblem, SolverOptions};
use crate::climate::PresetName;
use crate::econ::FexMode;

/// One point of a policy sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub preset: PresetName,
    pub rho: f64,
    pub damage: DamageChoice,
    pub fex: FexMode,
}

/// Headline numbers of one solved sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: SweepCell,
    pub scc0: f64,
    pub scc_2020: Option<f64>,
    pub peak_year: f64,
    pub peak_temperature: f64,
    pub temperature_2100: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str =
        "preset,rho,damage,fex,scc0,scc_2020,peak_year,peak_temperature,temperature_2100,iterations,converged";

    pub fn to_csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        let fex = match self.cell.fex {
            FexMode::Linear => "linear".to_string(),
            FexMode::Proportional(s) => format!("proportional:{}", s),
        };
        format!(
            "{},{},{:?},{},{},{},{},{},{},{},{}",
            self.cell.preset,
            self.cell.rho,
            self.cell.damage,
            fex,
            self.scc0,
            opt(self.scc_2020),
            self.peak_year,
            self.peak_temperature,
            opt(self.temperature_2100),
            self.iterations,
            self.converged
        )
    }
}

/// Cartesian product of the given axes.
pub fn grid(presets: &[PresetName], rhos: &[f64], damages: &[DamageChoice], fexes: &[FexMode]) -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for &preset in presets {
        for &rho in rhos {
            for &damage in damages {
                for &fex in fexes {
                    cells.push(SweepCell { preset, rho, damage, fex });
                }
            }
        }
    }
    cells
}

/// Solves every cell in parallel on top of `base`. Rows keep the order of
/// `cells`; a cell that fails to solve yields its error in place.
pub fn sweep(base: &PolicyConfig, cells: &[SweepCell], opts: &SolverOptions) -> Vec<Result<SweepRow, PolicyError>> {
    cells
        .par_iter()
        .map(|cell| {
            let cfg = PolicyConfig {
                preset: cell.preset,
                rho: cell.rho,
                damage: cell.damage,
                fex: cell.fex,
                ..*base
            };
            let problem = PolicyProblem::from_config(&cfg)?;
            let sol = solve(&problem, opts)?;
            let tr = &sol.trajectory;
            let (peak_year, peak_temperature) = tr.peak_temperature();
            Ok(SweepRow {
                cell: *cell,
                scc0: tr.scc[0],
                scc_2020: tr.index_of(2020.0).map(|i| tr.scc[i]),
                peak_year,
                peak_temperature,
                temperature_2100: tr.index_of(2100.0).map(|i| tr.t_at[i]),
                iterations: sol.iterations,
                converged: tr.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_cartesian() {
        let cells = grid(
            &[PresetName::Cdice, PresetName::Dice2016],
            &[0.001, 0.015, 0.05],
            &[DamageChoice::Nordhaus],
            &[FexMode::Linear, FexMode::proportional()],
        );
        assert_eq!(cells.len(), 12);
        assert_eq!(cells[1].fex, FexMode::proportional());
    }

    #[test]
    fn sweep_rows_follow_cells() {
        let cells = grid(&[PresetName::Cdice], &[0.015, 0.05], &[DamageChoice::Nordhaus], &[FexMode::Linear]);
        let rows = sweep(&PolicyConfig::default(), &cells, &SolverOptions::default());
        let rows: Vec<SweepRow> = rows.into_iter().map(|r| r.unwrap()).collect();
        assert_eq!(rows[0].cell, cells[0]);
        assert!(rows[0].scc0 > rows[1].scc0);
        assert!(rows.iter().all(|r| r.converged && r.scc_2020.is_some() && r.temperature_2100.is_some()));
        assert_eq!(rows[0].to_csv_line().split(',').count(), SweepRow::CSV_HEADER.split(',').count());
    }
}
