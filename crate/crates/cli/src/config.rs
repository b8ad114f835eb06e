//! Flat `key = value` run configuration.
//!
//! One key per line, `#` starts a comment, keys are case-sensitive and carry
//! their unit in the name. Unknown and repeated keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bec_decay::{Model, RunMode, SpeciesParams, TrapConfig};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("unknown preset `{0}` (available: fig1, fig2)")]
    UnknownPreset(String),
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    /// Values are `ν`; `ω = 2πν`.
    Hz,
    RadPerSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProfileChoice {
    #[default]
    Tf,
    Gp,
}

impl FromStr for ProfileChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tf" => Ok(ProfileChoice::Tf),
            "gp" => Ok(ProfileChoice::Gp),
            other => Err(format!("expected `tf` or `gp`, found `{other}`")),
        }
    }
}

impl fmt::Display for ProfileChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileChoice::Tf => "tf",
            ProfileChoice::Gp => "gp",
        })
    }
}

/// How the initial thermal cloud is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCloud {
    ThermalNumber(f64),
    /// Kelvin.
    Temperature(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub trap_freq: [f64; 3],
    pub freq_unit: FrequencyUnit,
    pub tau_s: f64,
    pub mass_kg: f64,
    pub a_m: f64,
    pub chi_cm3s: f64,
    pub xi_cm6s: f64,
    pub n_c: f64,
    pub initial_cloud: InitialCloud,
    pub modes: Vec<RunMode>,
    pub t_end_s: f64,
    pub n_out: usize,
    pub output_dir: PathBuf,
    pub plot: bool,
    pub profile: ProfileChoice,
}

impl RunConfig {
    pub fn trap(&self) -> Result<TrapConfig, ConfigError> {
        let [x, y, z] = self.trap_freq;
        let trap = match self.freq_unit {
            FrequencyUnit::Hz => TrapConfig::from_hz(x, y, z, self.tau_s),
            FrequencyUnit::RadPerSecond => TrapConfig::new(x, y, z, self.tau_s),
        };
        trap.map_err(|e| invalid("trap", e.to_string()))
    }

    pub fn species(&self) -> Result<SpeciesParams, ConfigError> {
        SpeciesParams::from_lab_units(self.mass_kg, self.a_m, self.chi_cm3s, self.xi_cm6s)
            .map_err(|e| invalid("species", e.to_string()))
    }

    pub fn model(&self) -> Result<Model, ConfigError> {
        Ok(Model::new(self.trap()?, self.species()?))
    }
}

const REQUIRED: [&str; 14] = [
    "name",
    "trap_freq_x",
    "trap_freq_y",
    "trap_freq_z",
    "trap_freq_unit",
    "tau_s",
    "mass_kg",
    "a_m",
    "chi_cm3s",
    "xi_cm6s",
    "N_C",
    "mode",
    "t_end_s",
    "n_out",
];
const OPTIONAL: [&str; 5] = ["N_T", "T_K", "output_dir", "plot", "profile"];

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(&str, &str)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| ConfigError::Syntax { line, text: content.to_string() })?;
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.to_string() });
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::Duplicate { line, key: key.to_string() });
        }
        entries.push((key, value));
    }

    let get = |key: &str| entries.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let mut missing: Vec<String> = REQUIRED.iter().filter(|k| get(k).is_none()).map(|k| k.to_string()).collect();
    let cloud = (get("N_T"), get("T_K"));
    if cloud == (None, None) {
        missing.push("N_T or T_K".into());
    }
    if !missing.is_empty() {
        return Err(ConfigError::Missing(missing));
    }
    let value = |key: &str| get(key).expect("checked above");

    let number = |key: &str| -> Result<f64, ConfigError> {
        let v = value(key);
        v.parse::<f64>().map_err(|_| invalid(key, format!("`{v}` is not a number")))
    };
    let positive = |key: &str| -> Result<f64, ConfigError> {
        let v = number(key)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(key, format!("must be positive and finite, got {v}")))
        }
    };
    let non_negative = |key: &str| -> Result<f64, ConfigError> {
        let v = number(key)?;
        if v >= 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(key, format!("must be non-negative and finite, got {v}")))
        }
    };

    let freq_unit = match value("trap_freq_unit") {
        "Hz" => FrequencyUnit::Hz,
        "rad/s" => FrequencyUnit::RadPerSecond,
        other => return Err(invalid("trap_freq_unit", format!("expected `Hz` or `rad/s`, found `{other}`"))),
    };
    let tau_s = number("tau_s")?;
    if tau_s.is_nan() || tau_s <= 0.0 {
        return Err(invalid("tau_s", format!("must be positive (or inf), got {tau_s}")));
    }
    let initial_cloud = match cloud {
        (Some(_), Some(_)) => return Err(invalid("N_T", "give exactly one of N_T and T_K, not both")),
        (Some(_), None) => InitialCloud::ThermalNumber(non_negative("N_T")?),
        (None, _) => InitialCloud::Temperature(positive("T_K")?),
    };
    let modes = value("mode")
        .split(',')
        .map(|m| m.trim().parse::<RunMode>().map_err(|e| invalid("mode", e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let n_out = value("n_out")
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| invalid("n_out", format!("expected an integer ≥ 2, found `{}`", value("n_out"))))?;
    let plot = match get("plot").unwrap_or("true") {
        "true" => true,
        "false" => false,
        other => return Err(invalid("plot", format!("expected `true` or `false`, found `{other}`"))),
    };
    let profile = get("profile").unwrap_or("tf").parse::<ProfileChoice>().map_err(|e| invalid("profile", e))?;
    let name = value("name");
    if name.contains(['/', '\\']) {
        return Err(invalid("name", "must not contain path separators"));
    }

    let config = RunConfig {
        name: name.to_string(),
        trap_freq: [positive("trap_freq_x")?, positive("trap_freq_y")?, positive("trap_freq_z")?],
        freq_unit,
        tau_s,
        mass_kg: positive("mass_kg")?,
        a_m: positive("a_m")?,
        chi_cm3s: non_negative("chi_cm3s")?,
        xi_cm6s: non_negative("xi_cm6s")?,
        n_c: positive("N_C")?,
        initial_cloud,
        modes,
        t_end_s: positive("t_end_s")?,
        n_out,
        output_dir: PathBuf::from(get("output_dir").unwrap_or(".")),
        plot,
        profile,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Cross-key checks.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.profile == ProfileChoice::Gp && self.trap_freq[0] != self.trap_freq[1] {
            return Err(invalid("profile", "the gp profile needs trap_freq_x == trap_freq_y"));
        }
        self.model().map(|_| ())
    }
}

pub const FIG1: &str = include_str!("../presets/fig1.cfg");
pub const FIG2: &str = include_str!("../presets/fig2.cfg");

pub fn preset(name: &str) -> Result<RunConfig, ConfigError> {
    match name {
        "fig1" => parse_config_str(FIG1),
        "fig2" => parse_config_str(FIG2),
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}
