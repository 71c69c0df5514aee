use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use casimir_friction::geometry::PlateConfig;
use casimir_friction::material::{MaterialModel, TabulatedPermittivity};
use casimir_friction::numerics::{ev_to_rad_per_s, nm_to_m, QuadratureSpec};
use casimir_friction::response::ThermalState;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RTOL_ENV: &str = "CASIMIR_QUAD_RTOL";
pub const DEFAULT_DENSITY: f64 = 1e28;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<casimir_friction::Error> for CliError {
    fn from(e: casimir_friction::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Drude,
    Plasmon,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeChoice {
    Auto,
    Linear,
    ZeroT,
    General,
    Plasmon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// Temperature in kelvin, or the zero-temperature limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Kelvin(f64),
    Zero,
}

impl FromStr for Temperature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("zero") {
            return Ok(Temperature::Zero);
        }
        s.parse::<f64>()
            .map(Temperature::Kelvin)
            .map_err(|_| format!("temperature must be a number of kelvin or \"zero\", got {s:?}"))
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Kelvin(t) => write!(f, "{t}"),
            Temperature::Zero => f.write_str("zero"),
        }
    }
}

impl Serialize for Temperature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Temperature::Kelvin(t) => s.serialize_f64(*t),
            Temperature::Zero => s.serialize_str("zero"),
        }
    }
}

impl<'de> Deserialize<'de> for Temperature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(t) => Ok(Temperature::Kelvin(t)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Physical inputs shared by the subcommands. Every field may also come
/// from the `--config` file; flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Plasma energy ħω_p in eV.
    #[arg(long = "wp-ev")]
    pub wp_ev: Option<f64>,
    /// Damping energy ħν in eV.
    #[arg(long = "nu-ev")]
    pub nu_ev: Option<f64>,
    /// Surface plasmon energy ħω_sp in eV (plasmon model).
    #[arg(long = "wsp-ev")]
    pub wsp_ev: Option<f64>,
    /// CSV with columns omega_rad_s,eps_re,eps_im (tabulated model).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Plate separation d in nm.
    #[arg(long = "gap-nm")]
    pub gap_nm: Option<f64>,
    /// Kelvin, or "zero".
    #[arg(long = "temp-k")]
    pub temp_k: Option<Temperature>,
    /// Sliding velocity v in m/s.
    #[arg(long = "velocity")]
    #[serde(alias = "velocity")]
    pub velocity_m_s: Option<f64>,
    /// Particle density of the resting plate, 1/m³.
    #[arg(long)]
    pub rho1: Option<f64>,
    /// Particle density of the moving plate, 1/m³.
    #[arg(long)]
    pub rho2: Option<f64>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeChoice>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Quadrature relative tolerance.
    #[arg(long = "rtol")]
    pub rel_tol: Option<f64>,
    /// Bisection budget of each adaptive integral.
    #[arg(long = "max-subdivisions")]
    pub max_subdivisions: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("config {}: {e}", path.display())))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(mut self, flags: &RunConfig) -> Self {
        overlay!(
            self, flags, model, wp_ev, nu_ev, wsp_ev, table, gap_nm, temp_k, velocity_m_s, rho1, rho2, regime,
            format, rel_tol, max_subdivisions
        );
        self
    }

    pub fn load(file: Option<&Path>, flags: &RunConfig) -> Result<Self, CliError> {
        let base = match file {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        Ok(base.overlay(flags))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    pub fn regime(&self) -> RegimeChoice {
        self.regime.unwrap_or(RegimeChoice::Auto)
    }

    pub fn material(&self) -> Result<MaterialModel, CliError> {
        let kind = self.model.ok_or_else(|| invalid("--model is required"))?;
        match kind {
            ModelKind::Drude => {
                let wp = non_negative("wp_ev", self.wp_ev)?;
                let nu = non_negative("nu_ev", self.nu_ev)?;
                Ok(MaterialModel::drude(ev_to_rad_per_s(wp), ev_to_rad_per_s(nu))?)
            }
            ModelKind::Plasmon => {
                let wsp = match (self.wsp_ev, self.wp_ev) {
                    (Some(e), _) => positive("wsp_ev", Some(e))?,
                    (None, Some(wp)) => positive("wp_ev", Some(wp))? / std::f64::consts::SQRT_2,
                    (None, None) => return Err(invalid("plasmon model needs wsp_ev (or wp_ev)")),
                };
                Ok(MaterialModel::plasmon_line(ev_to_rad_per_s(wsp))?)
            }
            ModelKind::Tabulated => {
                let path = self.table.as_ref().ok_or_else(|| invalid("tabulated model needs --table"))?;
                Ok(MaterialModel::tabulated(TabulatedPermittivity::from_csv_path(path)?))
            }
        }
    }

    pub fn gap_m(&self) -> Result<f64, CliError> {
        Ok(nm_to_m(positive("gap_nm", self.gap_nm)?))
    }

    pub fn temperature(&self) -> Result<Temperature, CliError> {
        let t = self.temp_k.ok_or_else(|| invalid("temp_k is required (kelvin or \"zero\")"))?;
        if let Temperature::Kelvin(k) = t {
            positive("temp_k", Some(k))?;
        }
        Ok(t)
    }

    pub fn thermal(&self) -> Result<ThermalState, CliError> {
        Ok(match self.temperature()? {
            Temperature::Kelvin(k) => ThermalState::finite(k)?,
            Temperature::Zero => ThermalState::zero(),
        })
    }

    pub fn velocity(&self) -> Result<f64, CliError> {
        positive("velocity_m_s", self.velocity_m_s)
    }

    pub fn plates(&self) -> Result<PlateConfig, CliError> {
        let rho1 = positive("rho1", Some(self.rho1.unwrap_or(DEFAULT_DENSITY)))?;
        let rho2 = positive("rho2", Some(self.rho2.unwrap_or(DEFAULT_DENSITY)))?;
        Ok(PlateConfig::new(self.gap_m()?, rho1, rho2)?)
    }

    /// Explicit setting, then the environment, then `default_rtol`.
    pub fn quadrature(&self, default_rtol: f64) -> Result<QuadratureSpec, CliError> {
        let rtol = match self.rel_tol {
            Some(r) => r,
            None => match std::env::var(RTOL_ENV) {
                Ok(s) => s
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("{RTOL_ENV} must be a number, got {s:?}")))?,
                Err(_) => default_rtol,
            },
        };
        let max_sub = self.max_subdivisions.unwrap_or(QuadratureSpec::DEFAULT_MAX_SUBDIVISIONS);
        QuadratureSpec::new(rtol, 0.0, max_sub).map_err(|e| invalid(e.to_string()))
    }
}

fn positive(name: &str, value: Option<f64>) -> Result<f64, CliError> {
    match value {
        None => Err(invalid(format!("{name} is required"))),
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(invalid(format!("{name} must be positive, got {v}"))),
    }
}

fn non_negative(name: &str, value: Option<f64>) -> Result<f64, CliError> {
    match value {
        None => Err(invalid(format!("{name} is required"))),
        Some(v) if v >= 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(invalid(format!("{name} must be non-negative, got {v}"))),
    }
}
