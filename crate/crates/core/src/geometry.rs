//! In-plane Fourier kernels of the dipole interaction and the `k`-space
//! moments that set the gap dependence of the friction force.
//!
//! The Coulomb kernel `1/r` between planes a height `z₀` apart transforms to
//! `ψ̂ = 2π e^{−q|z₀|}/q` with `q = |k⊥|`. The dipole–dipole interaction
//! squared, contracted over the tensor indices, is `ĝ = (2q²)² ψ̂²`: the
//! `z`-derivatives act as `±q` with the sign following the side of the plate,
//! so the contraction gives `2q²` rather than `k⊥² − q² = 0`.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::numerics::{try_integrate_finite, try_integrate_semi_infinite, Estimate, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateConfig {
    d: f64,
    rho1: f64,
    rho2: f64,
}

impl PlateConfig {
    /// `d` in metres, densities in 1/m³.
    pub fn new(d: f64, rho1: f64, rho2: f64) -> Result<Self> {
        require_positive("gap d", d)?;
        require_positive("rho1", rho1)?;
        require_positive("rho2", rho2)?;
        Ok(Self { d, rho1, rho2 })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    /// The common density, or `UnequalDensities`.
    pub fn equal_density(&self) -> Result<f64> {
        if self.rho1 == self.rho2 {
            Ok(self.rho1)
        } else {
            Err(Error::UnequalDensities {
                rho1: self.rho1,
                rho2: self.rho2,
            })
        }
    }

    pub fn with_gap(&self, d: f64) -> Result<Self> {
        Self::new(d, self.rho1, self.rho2)
    }
}

fn require_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("in-plane wavenumber must be positive, got {q}")))
    }
}

/// `2π e^{−q|z₀|}/q`.
pub fn psi_hat(z0: f64, q: f64) -> Result<f64> {
    require_q(q)?;
    Ok(2.0 * PI * (-q * z0.abs()).exp() / q)
}

/// `(2q²)² ψ̂(z₀, q)²`.
pub fn g_hat(z0: f64, q: f64) -> Result<f64> {
    let psi = psi_hat(z0, q)?;
    let c = 2.0 * q * q;
    Ok(c * c * psi * psi)
}

/// `∫_d^∞ dz₁ ∫_{−∞}^0 dz₂ ĝ(z₁ − z₂, q) = (2π)² e^{−2qd}`.
pub fn g_hat_z_integrated(q: f64, d: f64) -> f64 {
    4.0 * PI * PI * (-2.0 * q * d).exp()
}

/// The double `z`-integral of [`g_hat`] by nested quadrature.
pub fn g_hat_z_integrated_numeric(q: f64, d: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    require_q(q)?;
    require_positive("gap d", d)?;
    let scale = 1.0 / (2.0 * q);
    let inner_spec = spec.with_decay_scale(scale);
    let mut inner_err = 0.0_f64;
    let outer = try_integrate_semi_infinite(
        |z1| {
            // z₂ = −s
            let inner = try_integrate_semi_infinite(|s| g_hat(z1 + s, q), 0.0, &inner_spec)
                .map_err(Error::at_stage("z2 integral"))?;
            inner_err = inner_err.max(inner.rel_err());
            Ok::<_, Error>(inner.value)
        },
        d,
        &inner_spec,
    )
    .map_err(Error::at_stage("z1 integral"))?;
    Ok(Estimate {
        err_estimate: outer.err_estimate + inner_err * outer.value.abs(),
        ..outer
    })
}

/// `⟨cosⁿθ⟩` over the circle: `(n−1)!!/n!!` for even `n`, zero for odd.
pub fn angular_average_cos_power(n: u32) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    (1..=n / 2).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
}

/// `⟨cosⁿθ⟩` by quadrature over `[0, 2π]`.
pub fn angular_average_numeric(n: u32, spec: &QuadratureSpec) -> Result<Estimate> {
    let e = try_integrate_finite(|t: f64| Ok::<_, Error>(t.cos().powi(n as i32)), 0.0, 2.0 * PI, spec)
        .map_err(Error::at_stage("angular average"))?;
    Ok(Estimate {
        value: e.value / (2.0 * PI),
        err_estimate: e.err_estimate / (2.0 * PI),
        ..e
    })
}

fn gamma_int(n: u32) -> f64 {
    (1..n).fold(1.0, |acc, j| acc * j as f64)
}

/// `ρ₁ρ₂ ∫ d²k kₓⁿ e^{−2qd} = ρ₁ρ₂ · 2π⟨cosⁿθ⟩ · Γ(n+2)/(2d)^{n+2}` for even `n`.
pub fn k_moment_general(power: u32, config: &PlateConfig) -> Result<f64> {
    if power % 2 == 1 {
        return Err(Error::InvalidParameter(format!("moment power must be even, got {power}")));
    }
    let d = config.d();
    Ok(config.rho1() * config.rho2() * 2.0 * PI * angular_average_cos_power(power) * gamma_int(power + 2)
        / (2.0 * d).powi(power as i32 + 2))
}

fn check_power(power: u32, config: &PlateConfig) -> Result<()> {
    match power {
        2 => Ok(()),
        4 => config.equal_density().map(|_| ()),
        _ => Err(Error::InvalidParameter(format!("moment power must be 2 or 4, got {power}"))),
    }
}

/// `G = 3πρ₁ρ₂/(8d⁴)` for power 2 and `G_P = 45πρ²/(32d⁶)` for power 4.
pub fn k_moment(power: u32, config: &PlateConfig) -> Result<f64> {
    check_power(power, config)?;
    let d = config.d();
    let rr = config.rho1() * config.rho2();
    Ok(match power {
        2 => 3.0 * PI / (8.0 * d.powi(4)) * rr,
        _ => 45.0 * PI / (32.0 * d.powi(6)) * rr,
    })
}

/// [`k_moment`] with both the angular and the radial integral done by
/// quadrature.
pub fn k_moment_numeric(power: u32, config: &PlateConfig, spec: &QuadratureSpec) -> Result<Estimate> {
    check_power(power, config)?;
    let d = config.d();
    let angular = angular_average_numeric(power, spec)?;
    let radial = try_integrate_semi_infinite(
        |q: f64| Ok::<_, Error>(q.powi(power as i32 + 1) * (-2.0 * q * d).exp()),
        0.0,
        &spec.with_decay_scale(1.0 / (2.0 * d)),
    )
    .map_err(Error::at_stage("radial k integral"))?;
    let scale = config.rho1() * config.rho2() * 2.0 * PI;
    let value = scale * angular.value * radial.value;
    Ok(Estimate {
        value,
        err_estimate: value.abs() * (angular.rel_err() + radial.rel_err()),
        subdivisions: angular.subdivisions + radial.subdivisions,
        evaluations: angular.evaluations + radial.evaluations,
    })
}

/// `e^{2dkₓ} ∫ e^{−2d√(kₓ² + k_y²)} dk_y`, the `k_y` weight with the leading
/// exponential removed so it stays representable for large `2dkₓ`.
/// Equals `2kₓK₁(2dkₓ)e^{2dkₓ}`; tends to `1/d` as `kₓ → 0`.
pub fn transverse_weight_scaled(kx: f64, d: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    require_positive("gap d", d)?;
    if !(kx >= 0.0 && kx.is_finite()) {
        return Err(Error::Domain(format!("kx must be non-negative, got {kx}")));
    }
    // Gaussian width √(kₓ/d) for k_y ≪ kₓ, exponential 1/(2d) beyond.
    let scale = (kx / d + 0.25 / (d * d)).sqrt();
    let half = try_integrate_semi_infinite(
        |ky: f64| {
            let excess = ky * ky / ((kx * kx + ky * ky).sqrt() + kx);
            Ok::<_, Error>((-2.0 * d * excess).exp())
        },
        0.0,
        &spec.with_decay_scale(scale),
    )
    .map_err(Error::at_stage("k_y integral"))?;
    Ok(Estimate {
        value: 2.0 * half.value,
        err_estimate: 2.0 * half.err_estimate,
        ..half
    })
}
