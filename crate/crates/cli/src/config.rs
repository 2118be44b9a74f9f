use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cdice_core::econ::FexMode;
use cdice_core::policy::DamageChoice;
use cdice_core::PresetName;
use serde::{Deserialize, Serialize};

/// Which artifacts a command writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            "both" => Ok(Format::Both),
            other => bail!("unknown format `{}` (expected csv, svg or both)", other),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Both => "both",
        })
    }
}

pub fn parse_damage(s: &str) -> Result<DamageChoice> {
    match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "nordhaus" => Ok(DamageChoice::Nordhaus),
        "howard-sterner" | "hs" => Ok(DamageChoice::HowardSterner),
        "zero" | "none" => Ok(DamageChoice::Zero),
        other => bail!("unknown damage `{}` (expected nordhaus, howard-sterner or zero)", other),
    }
}

pub fn damage_name(d: DamageChoice) -> &'static str {
    match d {
        DamageChoice::Nordhaus => "nordhaus",
        DamageChoice::HowardSterner => "howard-sterner",
        DamageChoice::Zero => "zero",
    }
}

/// `linear`, `proportional` or `proportional:<share>`.
pub fn parse_fex(s: &str) -> Result<FexMode> {
    let s = s.trim().to_ascii_lowercase();
    match s.split_once(':') {
        None if s == "linear" => Ok(FexMode::Linear),
        None if s == "proportional" => Ok(FexMode::proportional()),
        Some(("proportional", share)) => {
            let share: f64 = share.parse().with_context(|| format!("bad forcing share `{}`", share))?;
            if !share.is_finite() || share < 0.0 {
                bail!("forcing share must be finite and non-negative, got {}", share);
            }
            Ok(FexMode::Proportional(share))
        }
        _ => bail!("unknown forcing mode `{}` (expected linear or proportional[:share])", s),
    }
}

pub fn fex_name(f: FexMode) -> String {
    match f {
        FexMode::Linear => "linear".to_string(),
        FexMode::Proportional(share) => format!("proportional:{}", share),
    }
}

/// Flat key-value configuration file. Every key mirrors a command-line flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub rho: Option<f64>,
    pub damage: Option<String>,
    pub fex: Option<String>,
    pub data_dir: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub max_iterations: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Keys set in `over` replace those in `self`.
    pub fn overlay(self, over: FileConfig) -> Self {
        Self {
            preset: over.preset.or(self.preset),
            dt: over.dt.or(self.dt),
            horizon: over.horizon.or(self.horizon),
            rho: over.rho.or(self.rho),
            damage: over.damage.or(self.damage),
            fex: over.fex.or(self.fex),
            data_dir: over.data_dir.or(self.data_dir),
            out_dir: over.out_dir.or(self.out_dir),
            format: over.format.or(self.format),
            max_iterations: over.max_iterations.or(self.max_iterations),
        }
    }
}

/// Validated settings. Unset values fall back to per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub preset: Option<PresetName>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub rho: Option<f64>,
    pub damage: Option<DamageChoice>,
    pub fex: Option<FexMode>,
    pub data_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub format: Format,
    pub max_iterations: Option<usize>,
}

impl Settings {
    pub fn from_config(cfg: &FileConfig) -> Result<Self> {
        let positive = |name: &str, v: Option<f64>| -> Result<Option<f64>> {
            match v {
                Some(x) if !(x.is_finite() && x > 0.0) => bail!("{} must be positive, got {}", name, x),
                _ => Ok(v),
            }
        };
        if let Some(rho) = cfg.rho {
            if !rho.is_finite() || rho < 0.0 {
                bail!("rho must be finite and non-negative, got {}", rho);
            }
        }
        if cfg.max_iterations == Some(0) {
            bail!("max_iterations must be at least 1");
        }
        Ok(Self {
            preset: cfg.preset.as_deref().map(PresetName::from_str).transpose()?,
            dt: positive("dt", cfg.dt)?,
            horizon: positive("horizon", cfg.horizon)?,
            rho: cfg.rho,
            damage: cfg.damage.as_deref().map(parse_damage).transpose()?,
            fex: cfg.fex.as_deref().map(parse_fex).transpose()?,
            data_dir: cfg.data_dir.clone(),
            out_dir: cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            format: cfg.format.as_deref().map(Format::from_str).transpose()?.unwrap_or(Format::Csv),
            max_iterations: cfg.max_iterations,
        })
    }

    pub fn to_config(&self) -> FileConfig {
        FileConfig {
            preset: self.preset.map(|p| p.as_str().to_string()),
            dt: self.dt,
            horizon: self.horizon,
            rho: self.rho,
            damage: self.damage.map(|d| damage_name(d).to_string()),
            fex: self.fex.map(fex_name),
            data_dir: self.data_dir.clone(),
            out_dir: Some(self.out_dir.clone()),
            format: Some(self.format.to_string()),
            max_iterations: self.max_iterations,
        }
    }

    /// The settings as a config file that parses back to the same values.
    pub fn to_toml(&self) -> Result<String> {
        Ok(format!("# settings used for this run\n{}", toml::to_string(&self.to_config())?))
    }

    pub fn preset_or(&self, default: PresetName) -> PresetName {
        self.preset.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_flags() {
        let file = FileConfig::parse("preset = \"DICE-2016\"\nrho = 0.05\n").unwrap();
        let flags = FileConfig {
            rho: Some(0.015),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.preset.as_deref(), Some("DICE-2016"));
        assert_eq!(merged.rho, Some(0.015));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(FileConfig::parse("preset = \"CDICE\"\nspeed = 3\n").is_err());
    }

    #[test]
    fn forcing_modes() {
        assert_eq!(parse_fex("linear").unwrap(), FexMode::Linear);
        assert_eq!(parse_fex("Proportional").unwrap(), FexMode::proportional());
        assert_eq!(parse_fex("proportional:0.25").unwrap(), FexMode::Proportional(0.25));
        assert!(parse_fex("proportional:-1").is_err());
        assert!(parse_fex("quadratic").is_err());
    }

    #[test]
    fn settings_validate() {
        let bad = |text: &str| Settings::from_config(&FileConfig::parse(text).unwrap()).is_err();
        assert!(bad("preset = \"NOPE\""));
        assert!(bad("dt = 0.0"));
        assert!(bad("rho = -0.1"));
        assert!(bad("format = \"png\""));
        assert!(bad("damage = \"cubic\""));
    }
}
