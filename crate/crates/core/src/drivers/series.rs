use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DataError;

/// Physical unit tag of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    GtcPerYear,
    Ppm,
    Kelvin,
    Fraction,
    WattsPerSquareMeter,
}

impl Unit {
    pub fn as_str(&self) -> &'static str {
        match self {
            Unit::GtcPerYear => "GtC/yr",
            Unit::Ppm => "ppm",
            Unit::Kelvin => "K",
            Unit::Fraction => "fraction",
            Unit::WattsPerSquareMeter => "W/m2",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Unit {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "GtC/yr" => Ok(Unit::GtcPerYear),
            "ppm" => Ok(Unit::Ppm),
            "K" => Ok(Unit::Kelvin),
            "fraction" => Ok(Unit::Fraction),
            "W/m2" => Ok(Unit::WattsPerSquareMeter),
            other => Err(DataError::UnknownUnit(other.to_string())),
        }
    }
}

/// Lower and upper bounds aligned with the series years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// A reference curve on an integer year axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSeries {
    pub name: String,
    pub unit: Unit,
    /// Free-text comment lines, without the leading `#`.
    pub notes: Vec<String>,
    pub years: Vec<i32>,
    pub values: Vec<f64>,
    pub envelope: Option<Envelope>,
}

fn interp(years: &[i32], values: &[f64], year: f64) -> Option<f64> {
    let first = *years.first()? as f64;
    let last = *years.last()? as f64;
    if year < first || year > last {
        return None;
    }
    let i = years.partition_point(|&y| (y as f64) <= year);
    if i == 0 {
        return Some(values[0]);
    }
    let lo = i - 1;
    if lo + 1 == years.len() || years[lo] as f64 == year {
        return Some(values[lo]);
    }
    let (y0, y1) = (years[lo] as f64, years[lo + 1] as f64);
    let w = (year - y0) / (y1 - y0);
    Some(values[lo] + w * (values[lo + 1] - values[lo]))
}

impl BenchmarkSeries {
    /// Builds a validated series.
    pub fn new(
        name: impl Into<String>,
        unit: Unit,
        years: Vec<i32>,
        values: Vec<f64>,
        envelope: Option<Envelope>,
    ) -> Result<Self, DataError> {
        let s = Self {
            name: name.into(),
            unit,
            notes: Vec::new(),
            years,
            values,
            envelope,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.years.is_empty() {
            return Err(DataError::Empty(self.name.clone()));
        }
        if self.values.len() != self.years.len() {
            return Err(DataError::Parse {
                name: self.name.clone(),
                line: 0,
                msg: "value count differs from year count".into(),
            });
        }
        for w in self.years.windows(2) {
            if w[1] <= w[0] {
                return Err(DataError::NonMonotone {
                    name: self.name.clone(),
                    year: w[1],
                });
            }
        }
        if let Some(env) = &self.envelope {
            if env.lower.len() != self.years.len() || env.upper.len() != self.years.len() {
                return Err(DataError::Parse {
                    name: self.name.clone(),
                    line: 0,
                    msg: "envelope length differs from year count".into(),
                });
            }
            for (k, (lo, up)) in env.lower.iter().zip(&env.upper).enumerate() {
                if lo > up {
                    return Err(DataError::EnvelopeInverted {
                        name: self.name.clone(),
                        year: self.years[k],
                    });
                }
            }
        }
        Ok(())
    }

    pub fn first_year(&self) -> i32 {
        self.years[0]
    }

    pub fn last_year(&self) -> i32 {
        *self.years.last().expect("validated series is non-empty")
    }

    /// Linearly interpolated value; `None` outside the covered years.
    pub fn value_at(&self, year: f64) -> Option<f64> {
        interp(&self.years, &self.values, year)
    }

    /// Interpolated envelope bounds.
    pub fn bounds_at(&self, year: f64) -> Option<(f64, f64)> {
        let env = self.envelope.as_ref()?;
        Some((interp(&self.years, &env.lower, year)?, interp(&self.years, &env.upper, year)?))
    }

    /// Annual values for `from ..= to`.
    pub fn annual_values(&self, from: i32, to: i32) -> Result<Vec<f64>, DataError> {
        if from < self.first_year() || to > self.last_year() {
            return Err(DataError::Coverage {
                name: self.name.clone(),
                first: self.first_year(),
                last: self.last_year(),
                from,
                to,
            });
        }
        Ok((from..=to)
            .map(|y| self.value_at(y as f64).expect("year inside coverage"))
            .collect())
    }

    /// Copy with every year between the first and last filled by interpolation.
    pub fn to_annual(&self) -> Self {
        let years: Vec<i32> = (self.first_year()..=self.last_year()).collect();
        let at = |v: &[f64]| -> Vec<f64> {
            years
                .iter()
                .map(|&y| interp(&self.years, v, y as f64).expect("inside coverage"))
                .collect()
        };
        Self {
            name: self.name.clone(),
            unit: self.unit,
            notes: self.notes.clone(),
            values: at(&self.values),
            envelope: self.envelope.as_ref().map(|e| Envelope {
                lower: at(&e.lower),
                upper: at(&e.upper),
            }),
            years,
        }
    }

    /// Appends the rows of `later` whose years lie beyond this series.
    pub fn extended_with(&self, later: &BenchmarkSeries) -> Result<Self, DataError> {
        if later.unit != self.unit {
            return Err(DataError::UnitMismatch {
                name: later.name.clone(),
                expected: self.unit.to_string(),
                found: later.unit.to_string(),
            });
        }
        let mut out = self.clone();
        out.name = format!("{}+{}", self.name, later.name);
        out.envelope = None;
        for (k, &y) in later.years.iter().enumerate() {
            if y > out.last_year() {
                out.years.push(y);
                out.values.push(later.values[k]);
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Serializes in the fixture format.
    pub fn to_csv_string(&self) -> String {
        let mut out = format!("# unit: {}\n", self.unit);
        for n in &self.notes {
            out.push_str(&format!("#{}\n", n));
        }
        match &self.envelope {
            Some(env) => {
                out.push_str("year,value,lower,upper\n");
                for k in 0..self.years.len() {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        self.years[k], self.values[k], env.lower[k], env.upper[k]
                    ));
                }
            }
            None => {
                out.push_str("year,value\n");
                for k in 0..self.years.len() {
                    out.push_str(&format!("{},{}\n", self.years[k], self.values[k]));
                }
            }
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        fs::write(path, self.to_csv_string()).map_err(|source| DataError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Parses fixture text; `unit` is the expected unit tag.
pub fn parse_series(text: &str, name: &str, unit: Unit) -> Result<BenchmarkSeries, DataError> {
    let mut found_unit = None;
    let mut notes = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            match rest.trim().strip_prefix("unit:") {
                Some(u) if found_unit.is_none() => found_unit = Some(u.trim().to_string()),
                _ => notes.push(rest.to_string()),
            }
        }
    }
    let found = found_unit.ok_or_else(|| DataError::MissingUnit(name.to_string()))?;
    let found_unit: Unit = found.parse()?;
    if found_unit != unit {
        return Err(DataError::UnitMismatch {
            name: name.to_string(),
            expected: unit.to_string(),
            found,
        });
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, msg: String| DataError::Parse {
        name: name.to_string(),
        line,
        msg,
    };
    let headers = reader
        .headers()
        .map_err(|e| parse_err(0, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    let with_envelope = match headers.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["year", "value"] => false,
        ["year", "value", "lower", "upper"] => true,
        _ => return Err(parse_err(0, format!("unexpected header {:?}", headers))),
    };

    let (mut years, mut values, mut lower, mut upper) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64, DataError> {
            record
                .get(i)
                .ok_or_else(|| parse_err(line, format!("missing column {}", i)))?
                .parse::<f64>()
                .map_err(|e| parse_err(line, e.to_string()))
        };
        let year = record
            .get(0)
            .unwrap_or("")
            .parse::<i32>()
            .map_err(|e| parse_err(line, format!("bad year: {}", e)))?;
        years.push(year);
        values.push(field(1)?);
        if with_envelope {
            lower.push(field(2)?);
            upper.push(field(3)?);
        }
    }
    let series = BenchmarkSeries {
        name: name.to_string(),
        unit,
        notes,
        years,
        values,
        envelope: with_envelope.then_some(Envelope { lower, upper }),
    };
    series.validate()?;
    Ok(series)
}

/// Reads a fixture CSV from disk.
pub fn load_series(path: &Path, unit: Unit) -> Result<BenchmarkSeries, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_series(&text, &name, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_series() {
        let s = parse_series("# unit: ppm\nyear,value\n2000,369.1\n2010,389.1\n", "c", Unit::Ppm).unwrap();
        assert_eq!(s.years, vec![2000, 2010]);
        assert_eq!(s.value_at(2005.0), Some(379.1));
        assert_eq!(s.value_at(1999.0), None);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(parse_series("", "e", Unit::Ppm).is_err());
        assert!(matches!(
            parse_series("# unit: ppm\nyear,value\n", "e", Unit::Ppm),
            Err(DataError::Empty(_))
        ));
    }

    #[test]
    fn missing_interior_year_is_interpolated() {
        let s = parse_series("# unit: K\nyear,value\n2000,1\n2001,2\n2003,4\n", "t", Unit::Kelvin).unwrap();
        let a = s.to_annual();
        assert_eq!(a.years, vec![2000, 2001, 2002, 2003]);
        assert_eq!(a.values[2], 3.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_series("# unit: K\nyear,value\n2000,1\n2000,2\n", "t", Unit::Kelvin),
            Err(DataError::NonMonotone { .. })
        ));
        assert!(matches!(
            parse_series("# unit: K\nyear,value\n2000,1\n", "t", Unit::Ppm),
            Err(DataError::UnitMismatch { .. })
        ));
        assert!(matches!(
            parse_series("year,value\n2000,1\n", "t", Unit::Ppm),
            Err(DataError::MissingUnit(_))
        ));
        assert!(matches!(
            parse_series("# unit: K\nyear,value\n2000,abc\n", "t", Unit::Kelvin),
            Err(DataError::Parse { .. })
        ));
        assert!(matches!(
            parse_series("# unit: K\nyear,value,lower,upper\n2000,1,2,0\n", "t", Unit::Kelvin),
            Err(DataError::EnvelopeInverted { .. })
        ));
    }

    #[test]
    fn envelope_round_trip() {
        let text = "# unit: fraction\n# note line\nyear,value,lower,upper\n0,1,1,1\n10,0.6775,0.5975,0.7575\n";
        let s = parse_series(text, "j", Unit::Fraction).unwrap();
        let (lo, up) = s.bounds_at(5.0).unwrap();
        assert!((lo - 0.79875).abs() < 1e-12 && (up - 0.87875).abs() < 1e-12);
        assert_eq!(s.to_csv_string(), text);
    }

    #[test]
    fn extension_appends_later_years() {
        let a = BenchmarkSeries::new("a", Unit::Ppm, vec![1850, 2005], vec![285.0, 379.0], None).unwrap();
        let b = BenchmarkSeries::new("b", Unit::Ppm, vec![2000, 2010], vec![369.0, 389.0], None).unwrap();
        let c = a.extended_with(&b).unwrap();
        assert_eq!(c.years, vec![1850, 2005, 2010]);
        let k = BenchmarkSeries::new("k", Unit::Kelvin, vec![2010], vec![1.0], None).unwrap();
        assert!(a.extended_with(&k).is_err());
    }

    proptest! {
        #[test]
        fn interpolation_stays_within_neighbours(a in -10.0f64..10.0, b in -10.0f64..10.0, y in 2000.0f64..2010.0) {
            let s = BenchmarkSeries::new("p", Unit::Kelvin, vec![2000, 2010], vec![a, b], None).unwrap();
            let v = s.value_at(y).unwrap();
            prop_assert!(v >= a.min(b) - 1e-12 && v <= a.max(b) + 1e-12);
        }
    }
}
