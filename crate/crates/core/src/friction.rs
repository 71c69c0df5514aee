//! Friction force per unit area, `F = ΔE/(2τv)`, in the three regimes.
//!
//! * Linear, finite `T`: `F = G·v·H₀`.
//! * Zero temperature, Drude head: `F = G_P·H_P·v³`.
//! * General: the `k`-space integral of the dissipation kernel,
//!
//! ```text
//!   F = ħ/(4π³) ∫₀^∞ kₓ K(kₓv) Y(kₓ) dkₓ,   Y(kₓ) = ∫ e^{−2d√(kₓ² + k_y²)} dk_y
//! ```
//!
//! with `K` from [`crate::response::dissipation_kernel`]. Densities cancel
//! in the general path; they only enter the closed forms through `G` and `D`.
//!
//! Forces are reported as magnitudes. The force always opposes the relative
//! motion.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::geometry::{k_moment, transverse_weight_scaled, PlateConfig};
use crate::material::{drude_small_m, spectral_density_from_r, Drude, MaterialModel, SpectralDensity};
use crate::numerics::{try_integrate_semi_infinite, Estimate, QuadratureSpec, HBAR};
use crate::response::{dissipation_kernel, h0, h_p, j_general_convolution, Convolution, ThermalState};

/// Beyond this the plasmon-line force underflows `f64`.
pub const SUPPRESSION_UNDERFLOW: f64 = 700.0;

/// `q ≈ TYPICAL_QD/d` is where the `d⁻⁶` moment weight `q⁵e^{−2qd}` sits.
const TYPICAL_QD: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    LinearFiniteT,
    #[serde(rename = "ZeroT_Cubic")]
    ZeroTCubic,
    GeneralNumeric,
    PlasmonLine,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LinearFiniteT => "LinearFiniteT",
            Regime::ZeroTCubic => "ZeroT_Cubic",
            Regime::GeneralNumeric => "GeneralNumeric",
            Regime::PlasmonLine => "PlasmonLine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    OpposesMotion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidityFlag {
    /// `k_BT` is not small against the range where `S(m) ≈ D·m` holds.
    ThermalNearSpectrumCutoff,
    /// `ħv/d` is not small against `k_BT`.
    BeyondLinearRegime,
    /// `ħqv` at `q ~ 1/d` exceeds the small-m validity cutoff.
    SpectrumCutoffExceeded,
    /// The plasmon-line force is below the smallest representable value.
    PlasmonUnderflow,
}

impl ValidityFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValidityFlag::ThermalNearSpectrumCutoff => "thermal_near_spectrum_cutoff",
            ValidityFlag::BeyondLinearRegime => "beyond_linear_regime",
            ValidityFlag::SpectrumCutoffExceeded => "spectrum_cutoff_exceeded",
            ValidityFlag::PlasmonUnderflow => "plasmon_underflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub quadrature_rel_err: f64,
    pub validity_flags: Vec<ValidityFlag>,
    /// `4ω_sp d/v` for the plasmon-line path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suppression_exponent: Option<f64>,
}

impl Diagnostics {
    fn exact() -> Self {
        Self {
            quadrature_rel_err: 0.0,
            validity_flags: Vec::new(),
            suppression_exponent: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrictionResult {
    /// N/m², never negative.
    pub force_per_area: f64,
    pub direction: Direction,
    pub regime: Regime,
    /// `ΔE/(2τv)` per unit area, N/m².
    pub delta_e_per_2tau_v: f64,
    pub diagnostics: Diagnostics,
}

impl FrictionResult {
    fn new(force: f64, regime: Regime, diagnostics: Diagnostics) -> Self {
        Self {
            force_per_area: force,
            direction: Direction::OpposesMotion,
            regime,
            delta_e_per_2tau_v: force,
            diagnostics,
        }
    }
}

fn finite_beta(thermal: ThermalState) -> Result<f64> {
    thermal
        .beta()
        .ok_or_else(|| Error::Domain("the linear regime needs a finite temperature".into()))
}

fn require_drude(material: &MaterialModel) -> Result<&Drude> {
    material
        .as_drude()
        .ok_or_else(|| Error::Domain(format!("closed form needs a Drude material, got {}", material.kind())))
}

/// `(16π²/15)·(d/(βħv))²`, the linear over cubic force ratio. Large values
/// mean the linear regime dominates.
pub fn linear_to_cubic_ratio(d: f64, thermal: ThermalState, v: f64) -> Result<f64> {
    require_positive("gap d", d)?;
    require_positive("v", v)?;
    let beta = finite_beta(thermal)?;
    let x = d / (beta * HBAR * v);
    Ok(16.0 * PI * PI / 15.0 * x * x)
}

/// Below this ratio the linear result is flagged.
const LINEAR_RATIO_FLOOR: f64 = 100.0;

fn linear_spectrum(material: &MaterialModel, rho: f64) -> Result<SpectralDensity> {
    if let Some(drude) = material.as_drude() {
        return drude_small_m(drude, rho, None);
    }
    let extracted = spectral_density_from_r(material, rho)?;
    if let SpectralDensity::DeltaLines { .. } = extracted.density {
        return Err(Error::Domain("a sharp plasmon line has no linear friction channel".into()));
    }
    Ok(extracted.density)
}

/// Linear finite-temperature friction `F = G·v·H₀`, with `H₀` by quadrature.
/// A Drude material uses its small-m head `S = D·m`.
pub fn force_linear(
    material: &MaterialModel,
    config: &PlateConfig,
    thermal: ThermalState,
    v: f64,
    spec: &QuadratureSpec,
) -> Result<FrictionResult> {
    require_non_negative("v", v)?;
    let beta = finite_beta(thermal)?;
    if let Some(d) = material.as_drude() {
        if d.nu() == 0.0 || d.omega_p() == 0.0 {
            return Ok(FrictionResult::new(0.0, Regime::LinearFiniteT, Diagnostics::exact()));
        }
    }
    let s1 = linear_spectrum(material, config.rho1())?;
    let s2 = linear_spectrum(material, config.rho2())?;
    let h = h0(&s1, &s2, thermal, spec)?;
    let force = k_moment(2, config)? * v * h.value;

    let mut diagnostics = Diagnostics {
        quadrature_rel_err: h.rel_err(),
        ..Diagnostics::exact()
    };
    if let Some(m_max) = s1.cutoff() {
        if 10.0 / beta > m_max {
            diagnostics.validity_flags.push(ValidityFlag::ThermalNearSpectrumCutoff);
        }
    }
    if v > 0.0 && linear_to_cubic_ratio(config.d(), thermal, v)? < LINEAR_RATIO_FLOOR {
        diagnostics.validity_flags.push(ValidityFlag::BeyondLinearRegime);
    }
    Ok(FrictionResult::new(force, Regime::LinearFiniteT, diagnostics))
}

/// `ν²v/(4β²d⁴ħω_p⁴)`, the Drude linear force with the densities cancelled.
pub fn force_linear_closed(drude: &Drude, d: f64, thermal: ThermalState, v: f64) -> Result<f64> {
    require_positive("gap d", d)?;
    require_non_negative("v", v)?;
    require_positive("omega_p", drude.omega_p())?;
    let beta = finite_beta(thermal)?;
    Ok(drude.nu().powi(2) * v / (4.0 * beta * beta * d.powi(4) * HBAR * drude.omega_p().powi(4)))
}

/// Zero-temperature friction of two equal Drude plates, `F = G_P·H_P·v³`.
pub fn force_zero_t(material: &MaterialModel, config: &PlateConfig, v: f64) -> Result<FrictionResult> {
    require_non_negative("v", v)?;
    let drude = require_drude(material)?;
    let rho = config.equal_density()?;
    if drude.nu() == 0.0 || drude.omega_p() == 0.0 {
        return Ok(FrictionResult::new(0.0, Regime::ZeroTCubic, Diagnostics::exact()));
    }
    let spectrum = drude_small_m(drude, rho, None)?;
    let SpectralDensity::DrudeSmallM { slope, m_max } = spectrum else {
        unreachable!("drude_small_m returns the small-m variant")
    };
    let force = k_moment(4, config)? * h_p(slope) * v.powi(3);
    let mut diagnostics = Diagnostics::exact();
    if HBAR * TYPICAL_QD * v / config.d() > m_max {
        diagnostics.validity_flags.push(ValidityFlag::SpectrumCutoffExceeded);
    }
    Ok(FrictionResult::new(force, Regime::ZeroTCubic, diagnostics))
}

/// `15ν²ħv³/(64π²d⁶ω_p⁴)`, the Drude zero-temperature force with the
/// densities cancelled.
pub fn force_zero_t_closed(drude: &Drude, d: f64, v: f64) -> Result<f64> {
    require_positive("gap d", d)?;
    require_non_negative("v", v)?;
    require_positive("omega_p", drude.omega_p())?;
    Ok(15.0 * drude.nu().powi(2) * HBAR * v.powi(3) / (64.0 * PI * PI * d.powi(6) * drude.omega_p().powi(4)))
}

fn single_line(material: &MaterialModel) -> bool {
    !material.delta_lines().is_empty()
}

/// Full finite-velocity friction from `Im R` of both plates.
///
/// Nesting: `K(kₓv)` innermost (frequency convolution, plus the thermal
/// channel at finite `T`), then the `k_y` weight, then `kₓ` over `[0, ∞)`.
/// Quadrature failures name the level that failed.
pub fn dissipation_general(
    material1: &MaterialModel,
    material2: &MaterialModel,
    config: &PlateConfig,
    thermal: ThermalState,
    v: f64,
    spec: &QuadratureSpec,
) -> Result<FrictionResult> {
    require_non_negative("v", v)?;
    let lines = (single_line(material1), single_line(material2));
    if lines.0 && lines.1 {
        if !thermal.is_zero() {
            return Err(Error::Domain("two plasmon lines are only modelled at zero temperature".into()));
        }
        let Convolution::Line { weight, support } = j_general_convolution(1.0, material1, material2, spec)? else {
            unreachable!("two line spectra convolve to a line")
        };
        return line_force(weight, support, config.d(), v, spec);
    }
    if (lines.0 || lines.1) && !thermal.is_zero() {
        return Err(Error::Domain("plasmon lines are only modelled at zero temperature".into()));
    }
    if v == 0.0 {
        return Ok(FrictionResult::new(0.0, Regime::GeneralNumeric, Diagnostics::exact()));
    }

    let d = config.d();
    let inner = spec.with_rel_tol((spec.rel_tol * 1e-2).max(1e-12));
    let mut inner_rel = 0.0_f64;
    let outer = try_integrate_semi_infinite(
        |kx| {
            let decay = (-2.0 * d * kx).exp();
            if decay == 0.0 {
                return Ok(0.0);
            }
            let w = kx * v;
            let k = if lines.0 || lines.1 {
                // plasmon line times a continuous spectrum, zero temperature
                let c = j_general_convolution(w, material1, material2, &inner)?.value();
                Estimate {
                    value: 2.0 * c,
                    ..Estimate::zero()
                }
            } else {
                dissipation_kernel(w, material1, material2, thermal, &inner)?
            };
            if k.value == 0.0 {
                return Ok::<_, Error>(0.0);
            }
            let y = transverse_weight_scaled(kx, d, &inner)?;
            inner_rel = inner_rel.max(k.rel_err()).max(y.rel_err());
            Ok(kx * k.value * y.value * decay)
        },
        0.0,
        &spec.with_decay_scale(1.0 / (2.0 * d)),
    )
    .map_err(Error::at_stage("k_x integral"))?;

    let force = HBAR / (4.0 * PI.powi(3)) * outer.value;
    let diagnostics = Diagnostics {
        quadrature_rel_err: outer.rel_err() + inner_rel,
        ..Diagnostics::exact()
    };
    Ok(FrictionResult::new(force.max(0.0), Regime::GeneralNumeric, diagnostics))
}

/// `ln F` for a convolution line `weight·δ(|ω_v| − support)`; finite even
/// where `F` itself underflows.
pub fn line_log_force(weight: f64, support: f64, d: f64, v: f64, spec: &QuadratureSpec) -> Result<(f64, Estimate)> {
    require_positive("v", v)?;
    require_positive("gap d", d)?;
    require_positive("line support", support)?;
    let k0 = support / v;
    let y = transverse_weight_scaled(k0, d, spec)?;
    // F = ħ·weight·k₀·Y(k₀)/(2π³v)
    let log = (HBAR * weight * k0 * y.value / (2.0 * PI.powi(3) * v)).ln() - 2.0 * d * k0;
    Ok((log, y))
}

fn line_force(weight: f64, support: f64, d: f64, v: f64, spec: &QuadratureSpec) -> Result<FrictionResult> {
    let mut diagnostics = Diagnostics::exact();
    if v == 0.0 {
        diagnostics.suppression_exponent = Some(f64::INFINITY);
        diagnostics.validity_flags.push(ValidityFlag::PlasmonUnderflow);
        return Ok(FrictionResult::new(0.0, Regime::PlasmonLine, diagnostics));
    }
    let exponent = 2.0 * d * support / v;
    diagnostics.suppression_exponent = Some(exponent);
    if exponent > SUPPRESSION_UNDERFLOW {
        diagnostics.validity_flags.push(ValidityFlag::PlasmonUnderflow);
        return Ok(FrictionResult::new(0.0, Regime::PlasmonLine, diagnostics));
    }
    let (log, y) = line_log_force(weight, support, d, v, spec)?;
    diagnostics.quadrature_rel_err = y.rel_err();
    Ok(FrictionResult::new(log.exp(), Regime::PlasmonLine, diagnostics))
}

/// Friction between two undamped plates whose response is a single surface
/// plasmon line at `ω_sp`. The force carries the factor `e^{−4ω_sp d/v}`.
pub fn force_plasmon(omega_sp: f64, config: &PlateConfig, v: f64, spec: &QuadratureSpec) -> Result<FrictionResult> {
    require_positive("omega_sp", omega_sp)?;
    require_non_negative("v", v)?;
    let (weight, support) = plasmon_line_pair(omega_sp);
    line_force(weight, support, config.d(), v, spec)
}

/// `((π/2)ω_sp)²` at `2ω_sp`.
pub fn plasmon_line_pair(omega_sp: f64) -> (f64, f64) {
    ((0.5 * PI * omega_sp).powi(2), 2.0 * omega_sp)
}
