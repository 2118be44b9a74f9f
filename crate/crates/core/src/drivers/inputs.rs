use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{co2_forcing_series, load_series, BenchmarkSeries, DataError, Unit, RCP_BASE_PPM, RCP_F2X};

/// Environment variable overriding the data directory.
pub const DATA_DIR_ENV: &str = "CDICE_DATA_DIR";

/// Emission and concentration pathways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RcpId {
    Historical,
    Rcp26,
    Rcp45,
    Rcp60,
    Rcp85,
}

impl RcpId {
    pub const FUTURE: [RcpId; 4] = [RcpId::Rcp26, RcpId::Rcp45, RcpId::Rcp60, RcpId::Rcp85];

    pub fn file_stem(&self) -> &'static str {
        match self {
            RcpId::Historical => "historical",
            RcpId::Rcp26 => "rcp26",
            RcpId::Rcp45 => "rcp45",
            RcpId::Rcp60 => "rcp60",
            RcpId::Rcp85 => "rcp85",
        }
    }
}

impl fmt::Display for RcpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.file_stem().to_uppercase())
    }
}

impl FromStr for RcpId {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.trim().to_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match norm.as_str() {
            "historical" | "hist" => Ok(RcpId::Historical),
            "rcp26" | "26" => Ok(RcpId::Rcp26),
            "rcp45" | "45" => Ok(RcpId::Rcp45),
            "rcp60" | "60" | "rcp6" => Ok(RcpId::Rcp60),
            "rcp85" | "85" => Ok(RcpId::Rcp85),
            _ => Err(DataError::UnknownScenario(s.to_string())),
        }
    }
}

/// Root of the reference data tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDir {
    pub root: PathBuf,
}

impl DataDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// `$CDICE_DATA_DIR`, else `./data` if present, else the tree shipped with the sources.
    pub fn locate() -> Self {
        if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
            return Self::new(dir);
        }
        let local = Path::new("data");
        if local.join("rcp").is_dir() {
            return Self::new(local);
        }
        Self::new(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
    }

    pub fn emissions_path(&self, id: RcpId) -> PathBuf {
        self.root.join("rcp").join(format!("{}_emissions.csv", id.file_stem()))
    }

    pub fn concentration_path(&self, id: RcpId) -> PathBuf {
        self.root.join("rcp").join(format!("{}_concentration.csv", id.file_stem()))
    }

    pub fn temperature_path(&self, id: RcpId) -> PathBuf {
        self.root.join("cmip5").join(format!("{}_temperature.csv", id.file_stem()))
    }

    pub fn pulse_path(&self) -> PathBuf {
        self.root.join("joos").join("pulse_airborne_fraction.csv")
    }

    pub fn geoffroy_path(&self) -> PathBuf {
        self.root.join("geoffroy").join("two_layer_params.csv")
    }

    pub fn emissions(&self, id: RcpId) -> Result<BenchmarkSeries, DataError> {
        load_series(&self.emissions_path(id), Unit::GtcPerYear)
    }

    pub fn concentration(&self, id: RcpId) -> Result<BenchmarkSeries, DataError> {
        load_series(&self.concentration_path(id), Unit::Ppm)
    }

    /// CMIP5 warming envelope; not available for the historical pathway alone.
    pub fn temperature(&self, id: RcpId) -> Result<BenchmarkSeries, DataError> {
        load_series(&self.temperature_path(id), Unit::Kelvin)
    }

    pub fn pulse_response(&self) -> Result<BenchmarkSeries, DataError> {
        load_series(&self.pulse_path(), Unit::Fraction)
    }

    /// Historical data spliced with a future pathway on an annual grid.
    pub fn scenario(&self, id: RcpId) -> Result<ScenarioInputs, DataError> {
        let hist_e = self.emissions(RcpId::Historical)?;
        let hist_c = self.concentration(RcpId::Historical)?;
        let (e, c) = match id {
            RcpId::Historical => (hist_e, hist_c),
            _ => (
                hist_e.extended_with(&self.emissions(id)?)?,
                hist_c.extended_with(&self.concentration(id)?)?,
            ),
        };
        ScenarioInputs::from_series(id, &e, &c)
    }
}

/// Annual emissions, concentration and CO2 forcing for one pathway.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioInputs {
    pub rcp: RcpId,
    pub years: Vec<i32>,
    /// GtC per year.
    pub emissions: Vec<f64>,
    /// ppm.
    pub concentration: Vec<f64>,
    /// W/m² from the RCP forcing formula.
    pub co2_forcing: Vec<f64>,
}

impl ScenarioInputs {
    /// Interpolates both series to their common annual range.
    pub fn from_series(rcp: RcpId, e: &BenchmarkSeries, c: &BenchmarkSeries) -> Result<Self, DataError> {
        let from = e.first_year().max(c.first_year());
        let to = e.last_year().min(c.last_year());
        if to < from {
            return Err(DataError::Coverage {
                name: c.name.clone(),
                first: c.first_year(),
                last: c.last_year(),
                from: e.first_year(),
                to: e.last_year(),
            });
        }
        let emissions = e.annual_values(from, to)?;
        let concentration = c.annual_values(from, to)?;
        let co2_forcing = co2_forcing_series(&concentration, RCP_BASE_PPM, RCP_F2X);
        Ok(Self {
            rcp,
            years: (from..=to).collect(),
            emissions,
            concentration,
            co2_forcing,
        })
    }

    pub fn first_year(&self) -> i32 {
        self.years[0]
    }

    pub fn last_year(&self) -> i32 {
        *self.years.last().expect("non-empty")
    }

    pub fn index_of(&self, year: i32) -> Option<usize> {
        (year >= self.first_year() && year <= self.last_year()).then(|| (year - self.first_year()) as usize)
    }
}
