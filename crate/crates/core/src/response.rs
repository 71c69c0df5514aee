//! Oscillator response and the dissipation spectral functions `J(ω_v)`.
//!
//! For a pair of oscillators with frequencies `ω₁, ω₂` and polarizabilities
//! `α₁, α₂` the causal response is
//!
//! ```text
//!   φ(t) = C₋ sin(ω₋t) + C₊ sin(ω₊t),   t > 0,   ω± = |ω₁ ± ω₂|
//!   C± = (H/ħ) sinh(βħω±/2)
//!   H  = ħ²ω₁ω₂α₁α₂ / (4 sinh(βħω₁/2) sinh(βħω₂/2))
//! ```
//!
//! Integrated against the `δ`-kernel of the closed loop, `C₋` gives the
//! channel that survives `ω_v → 0` (linear friction, finite `T` only) and
//! `C₊` the channel `ω₁ + ω₂ = |ω_v|` that survives at `T = 0`.
//!
//! Thermal factors are evaluated through `e^{−2x}` and `expm1` so that
//! neither `β → ∞` nor `ω → 0` overflows or cancels.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::material::{MaterialModel, SpectralDensity};
use crate::numerics::{
    try_integrate_finite_with_breaks, try_integrate_semi_infinite_with_breaks, Estimate,
    QuadratureSpec, HBAR, K_B,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalState {
    /// Temperature in kelvin.
    Finite { temperature: f64 },
    ZeroT,
}

impl ThermalState {
    pub fn finite(temperature: f64) -> Result<Self> {
        require_positive("temperature", temperature)?;
        Ok(Self::Finite { temperature })
    }

    pub fn zero() -> Self {
        Self::ZeroT
    }

    pub fn temperature(&self) -> Option<f64> {
        match self {
            Self::Finite { temperature } => Some(*temperature),
            Self::ZeroT => None,
        }
    }

    /// `β = 1/(k_B T)` in 1/J; `None` at zero temperature.
    pub fn beta(&self) -> Option<f64> {
        self.temperature().map(|t| 1.0 / (K_B * t))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::ZeroT)
    }
}

/// `1 − e^{−2x}` without cancellation.
fn one_minus_exp2(x: f64) -> f64 {
    -(-2.0 * x).exp_m1()
}

/// `coth x` for `x ≥ 0`, equal to 1 at `x = ∞`.
pub(crate) fn coth(x: f64) -> f64 {
    if x.is_infinite() {
        return 1.0;
    }
    (1.0 + (-2.0 * x).exp()) / one_minus_exp2(x)
}

/// `1/sinh²x` for `x > 0`.
pub(crate) fn inv_sinh_sq(x: f64) -> f64 {
    let d = one_minus_exp2(x);
    4.0 * (-2.0 * x).exp() / (d * d)
}

/// `sinh x / (sinh y · sinh(x + y))` for `x, y ≥ 0`.
pub(crate) fn sinh_ratio(x: f64, y: f64) -> f64 {
    2.0 * (-2.0 * y).exp() * one_minus_exp2(x) / (one_minus_exp2(y) * one_minus_exp2(x + y))
}

/// Amplitudes of the two sine components of `φ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseCoeffs {
    pub omega_minus: f64,
    pub omega_plus: f64,
    pub c_minus: f64,
    pub c_plus: f64,
    /// `H`; zero at `T = 0`.
    pub h: f64,
}

impl ResponseCoeffs {
    /// `alpha1`, `alpha2` are polarizability volumes (m³); the coefficients
    /// come out in J·m⁶.
    pub fn new(omega1: f64, omega2: f64, alpha1: f64, alpha2: f64, thermal: ThermalState) -> Result<Self> {
        require_positive("omega1", omega1)?;
        require_positive("omega2", omega2)?;
        require_positive("alpha1", alpha1)?;
        require_positive("alpha2", alpha2)?;
        let omega_minus = (omega1 - omega2).abs();
        let omega_plus = omega1 + omega2;
        // C± = (ħω₁ω₂α₁α₂/4)·sinh(x₁ ± x₂)/(sinh x₁ sinh x₂)
        let base = 0.25 * HBAR * omega1 * omega2 * alpha1 * alpha2;
        let coeffs = match thermal.beta() {
            None => Self {
                omega_minus,
                omega_plus,
                c_minus: 0.0,
                c_plus: 2.0 * base,
                h: 0.0,
            },
            Some(beta) => {
                let x1 = 0.5 * beta * HBAR * omega1;
                let x2 = 0.5 * beta * HBAR * omega2;
                let (hi, lo) = if x1 >= x2 { (x1, x2) } else { (x2, x1) };
                let c_plus = base * (coth(x1) + coth(x2));
                let c_minus = if hi == lo { 0.0 } else { base * sinh_ratio(hi - lo, lo) };
                let h = HBAR * base * 4.0 * (-(x1 + x2)).exp() / (one_minus_exp2(x1) * one_minus_exp2(x2));
                Self {
                    omega_minus,
                    omega_plus,
                    c_minus,
                    c_plus,
                    h,
                }
            }
        };
        Ok(coeffs)
    }
}

/// `φ(t)`, zero for `t ≤ 0`.
pub fn phi(t: f64, omega1: f64, omega2: f64, alpha1: f64, alpha2: f64, thermal: ThermalState) -> Result<f64> {
    let c = ResponseCoeffs::new(omega1, omega2, alpha1, alpha2, thermal)?;
    if t <= 0.0 {
        return Ok(0.0);
    }
    Ok(c.c_minus * (c.omega_minus * t).sin() + c.c_plus * (c.omega_plus * t).sin())
}

fn finite_beta(thermal: ThermalState, what: &str) -> Result<f64> {
    thermal
        .beta()
        .ok_or_else(|| Error::Domain(format!("{what} needs a finite temperature")))
}

fn pointwise(s: &SpectralDensity, what: &str) -> Result<()> {
    if let SpectralDensity::DeltaLines { .. } = s {
        return Err(Error::Domain(format!(
            "{what} needs a continuous or small-m spectrum, not delta lines"
        )));
    }
    Ok(())
}

/// `H₀ = (πβħ/2) ∫₀^∞ S₁(m)S₂(m) / sinh²(βm/2) dm`, where `S = m²α_I(m²)`.
/// Units J·s·m⁶.
pub fn h0(s1: &SpectralDensity, s2: &SpectralDensity, thermal: ThermalState, spec: &QuadratureSpec) -> Result<Estimate> {
    pointwise(s1, "H0")?;
    pointwise(s2, "H0")?;
    let beta = finite_beta(thermal, "H0")?;
    let integral = try_integrate_semi_infinite_with_breaks(
        |m| {
            let weight = inv_sinh_sq(0.5 * beta * m);
            if weight == 0.0 {
                return Ok::<_, Error>(0.0);
            }
            Ok(s1.value(m)? * s2.value(m)? * weight)
        },
        0.0,
        &[s1.kinks(), s2.kinks()]
            .concat()
            .into_iter()
            .filter(|m| inv_sinh_sq(0.5 * beta * m) > 0.0)
            .collect::<Vec<_>>(),
        &spec.with_decay_scale(1.0 / beta),
    )
    .map_err(Error::at_stage("H0 thermal integral"))?;
    let scale = 0.5 * PI * beta * HBAR;
    Ok(Estimate {
        value: scale * integral.value,
        err_estimate: scale * integral.err_estimate,
        ..integral
    })
}

/// Closed form of [`h0`] for two linear spectra `S = D·m`:
/// `H₀ = (2πħ/β²)·D₁D₂·π²/3`.
pub fn h0_drude_closed(slope1: f64, slope2: f64, thermal: ThermalState) -> Result<f64> {
    let beta = finite_beta(thermal, "H0")?;
    Ok(2.0 * PI * HBAR / (beta * beta) * slope1 * slope2 * PI * PI / 3.0)
}

/// Linear-regime `J = 2τω_v²H₀`.
pub fn j_linear(
    omega_v: f64,
    s1: &SpectralDensity,
    s2: &SpectralDensity,
    thermal: ThermalState,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    require_positive("tau", tau)?;
    let h = h0(s1, s2, thermal, spec)?;
    let scale = 2.0 * tau * omega_v * omega_v;
    Ok(Estimate {
        value: scale * h.value,
        err_estimate: scale * h.err_estimate,
        ..h
    })
}

fn check_cutoff(s: &SpectralDensity, w: f64) -> Result<()> {
    if let Some(m_max) = s.cutoff() {
        if HBAR * w > m_max {
            return Err(Error::SpectrumCutoffExceeded {
                omega_v: w,
                cutoff: m_max / HBAR,
            });
        }
    }
    Ok(())
}

/// Zero-temperature `J = 2πτħ|ω_v| ∫₀^{|ω_v|} S₁(ħω₁) S₂(ħ(|ω_v| − ω₁)) dω₁`.
pub fn j_zero_t(
    omega_v: f64,
    s1: &SpectralDensity,
    s2: &SpectralDensity,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    require_positive("tau", tau)?;
    pointwise(s1, "j_zero_t")?;
    pointwise(s2, "j_zero_t")?;
    let w = omega_v.abs();
    if w == 0.0 {
        return Ok(Estimate::zero());
    }
    check_cutoff(s1, w)?;
    check_cutoff(s2, w)?;
    let to_omega = |k: &[f64]| k.iter().map(|m| m / HBAR).collect::<Vec<_>>();
    let conv = try_integrate_finite_with_breaks(
        |w1| Ok::<_, Error>(s1.value(HBAR * w1)? * s2.value(HBAR * (w - w1))?),
        0.0,
        w,
        &convolution_breaks(w, &to_omega(s1.kinks()), &to_omega(s2.kinks())),
        spec,
    )
    .map_err(Error::at_stage("zero-T convolution"))?;
    let scale = 2.0 * PI * tau * HBAR * w;
    Ok(Estimate {
        value: scale * conv.value,
        err_estimate: scale * conv.err_estimate,
        ..conv
    })
}

/// `H_P = (π/6)ħ³D²`, so that the Drude zero-temperature `J = 2τω_v⁴H_P`.
pub fn h_p(slope: f64) -> f64 {
    PI / 6.0 * HBAR.powi(3) * slope * slope
}

/// [`j_zero_t`] for two equal linear spectra: `(π/3)τħ³D²ω_v⁴`.
pub fn j_zero_t_drude_closed(omega_v: f64, slope: f64, tau: f64) -> f64 {
    2.0 * tau * omega_v.powi(4) * h_p(slope)
}

/// Kinks of `f₁(ω₁)·f₂(w − ω₁)` on `(0, w)`.
fn convolution_breaks(w: f64, k1: &[f64], k2: &[f64]) -> Vec<f64> {
    k1.iter().copied().chain(k2.iter().map(|k| w - k)).filter(|x| *x > 0.0 && *x < w).collect()
}

/// `∫₀^{|ω_v|} Im R₁(ω₁) Im R₂(|ω_v| − ω₁) dω₁`, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convolution {
    Value(Estimate),
    /// `weight · δ(|ω_v| − support)`, from two sharp lines.
    Line { weight: f64, support: f64 },
}

impl Convolution {
    /// Pointwise value; a line contributes nothing away from its support.
    pub fn value(&self) -> f64 {
        match self {
            Self::Value(e) => e.value,
            Self::Line { .. } => 0.0,
        }
    }
}

/// Convolution of `Im R` of two materials at `|ω_v|`. Plasmon lines are
/// folded in analytically.
pub fn j_general_convolution(
    omega_v: f64,
    r1: &MaterialModel,
    r2: &MaterialModel,
    spec: &QuadratureSpec,
) -> Result<Convolution> {
    let w = omega_v.abs();
    let lines1 = r1.delta_lines();
    let lines2 = r2.delta_lines();
    match (lines1.first(), lines2.first()) {
        (Some(a), Some(b)) => Ok(Convolution::Line {
            weight: a.weight * b.weight,
            support: a.omega + b.omega,
        }),
        (Some(line), None) | (None, Some(line)) => {
            let other = if lines1.is_empty() { r1 } else { r2 };
            let value = if line.omega < w {
                -line.weight * other.im_response(w - line.omega)?
            } else {
                0.0
            };
            Ok(Convolution::Value(Estimate {
                value,
                ..Estimate::zero()
            }))
        }
        (None, None) => {
            if w == 0.0 {
                return Ok(Convolution::Value(Estimate::zero()));
            }
            let e = try_integrate_finite_with_breaks(
                |w1| Ok::<_, Error>(r1.im_response(w1)? * r2.im_response(w - w1)?),
                0.0,
                w,
                &convolution_breaks(w, r1.kinks(), r2.kinks()),
                spec,
            )
            .map_err(Error::at_stage("Im R convolution"))?;
            Ok(Convolution::Value(e))
        }
    }
}

/// Density-free dissipation rate `W(ω_v) = ρ₁ρ₂ J(ω_v)/τ` for two
/// continuous materials, in J/s. Its `k`-space integral against the
/// geometric kernel gives the force per area.
///
/// With `S = −Im R/(2π²ρ)` and `w = |ω_v|`:
///
/// ```text
///   W = ħw/(4π³) · [ ∫₀^w ImR₁(ω₁)ImR₂(w−ω₁)(coth(βħω₁/2) + coth(βħ(w−ω₁)/2)) dω₁
///                  + ∫₀^∞ (ImR₁(ω+w)ImR₂(ω) + ImR₁(ω)ImR₂(ω+w))
///                         · sinh(βħw/2)/(sinh(βħω/2) sinh(βħ(ω+w)/2)) dω ]
/// ```
///
/// The first integral is the `C₊` channel (`ω₁ + ω₂ = w`), the second the
/// `C₋` channel (`|ω₁ − ω₂| = w`), which vanishes at `T = 0`.
pub fn pair_dissipation_rate(
    omega_v: f64,
    r1: &MaterialModel,
    r2: &MaterialModel,
    thermal: ThermalState,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let k = dissipation_kernel(omega_v, r1, r2, thermal, spec)?;
    let prefactor = HBAR * omega_v.abs() / (4.0 * PI.powi(3));
    Ok(Estimate {
        value: prefactor * k.value,
        err_estimate: prefactor * k.err_estimate,
        ..k
    })
}

/// The bracket of [`pair_dissipation_rate`], `K(|ω_v|)` in rad/s.
pub fn dissipation_kernel(
    omega_v: f64,
    r1: &MaterialModel,
    r2: &MaterialModel,
    thermal: ThermalState,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !r1.delta_lines().is_empty() || !r2.delta_lines().is_empty() {
        return Err(Error::Domain(
            "plasmon-line materials have no continuous spectrum; use the plasmon-line path".into(),
        ));
    }
    let w = omega_v.abs();
    if w == 0.0 {
        return Ok(Estimate::zero());
    }

    let (plus, minus) = match thermal.beta() {
        None => {
            let c = try_integrate_finite_with_breaks(
                |w1| Ok::<_, Error>(r1.im_response(w1)? * r2.im_response(w - w1)?),
                0.0,
                w,
                &convolution_breaks(w, r1.kinks(), r2.kinks()),
                spec,
            )
            .map_err(Error::at_stage("Im R convolution"))?;
            (
                Estimate {
                    value: 2.0 * c.value,
                    err_estimate: 2.0 * c.err_estimate,
                    ..c
                },
                Estimate::zero(),
            )
        }
        Some(beta) => {
            let half = 0.5 * beta * HBAR;
            let plus = try_integrate_finite_with_breaks(
                |w1| {
                    let w2 = w - w1;
                    let a = r1.im_response(w1)?;
                    let b = r2.im_response(w2)?;
                    if a == 0.0 || b == 0.0 {
                        return Ok::<_, Error>(0.0);
                    }
                    Ok(a * b * (coth(half * w1) + coth(half * w2)))
                },
                0.0,
                w,
                &convolution_breaks(w, r1.kinks(), r2.kinks()),
                spec,
            )
            .map_err(Error::at_stage("C+ channel"))?;
            let x = half * w;
            // kinks of Im R(ω) and of Im R(ω + w)
            let shifted: Vec<f64> = [r1.kinks(), r2.kinks()].concat();
            let breaks: Vec<f64> = shifted
                .iter()
                .flat_map(|k| [*k, k - w])
                .filter(|om| *om > 0.0 && sinh_ratio(x, half * om) > 0.0)
                .collect();
            let minus = try_integrate_semi_infinite_with_breaks(
                |om| {
                    // the Boltzmann tail underflows long before a table ends
                    let weight = sinh_ratio(x, half * om);
                    if weight == 0.0 {
                        return Ok::<_, Error>(0.0);
                    }
                    let pair = r1.im_response(om + w)? * r2.im_response(om)? + r1.im_response(om)? * r2.im_response(om + w)?;
                    Ok(pair * weight)
                },
                0.0,
                &breaks,
                &spec.with_decay_scale(1.0 / (beta * HBAR)),
            )
            .map_err(Error::at_stage("C- channel"))?;
            (plus, minus)
        }
    };

    Ok(Estimate {
        value: plus.value + minus.value,
        err_estimate: plus.err_estimate + minus.err_estimate,
        subdivisions: plus.subdivisions + minus.subdivisions,
        evaluations: plus.evaluations + minus.evaluations,
    })
}
