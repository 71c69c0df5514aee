//! Closed-loop sliding motion and its Fourier transform.
//!
//! The moving plate sits at `x = v·q(t)` with
//!
//! ```text
//!          ⎧ −τ − (t + τ)/α    −(α+1)τ < t < −τ
//!   q(t) = ⎨  t                −τ < t < τ
//!          ⎩  τ − (t − τ)/α     τ < t < (α+1)τ
//! ```
//!
//! and `q = 0` outside. The transform used by the dissipation integrals is
//!
//! ```text
//!   Q̂(ω, −ω_v) = ∫ (e^{iω_v q(t)} − 1) e^{−iωt} dt
//! ```
//!
//! which [`qhat_closed_form`] and [`qhat_numeric`] both return as a function
//! of `(ω, ω_v)`. Since `q` is real and odd, the transform is real.
//!
//! For `τ → ∞` the combination `(ω/4)Σ_{n=±1}|Q̂|²` tends to
//! `πτ(ω_v²/ω)[δ(ω − ω_v) + δ(ω + ω_v)]`, represented by [`DeltaKernel`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::numerics::{integrate_finite, QuadratureSpec};

/// Duration factor `α` of the slow legs: `Finite(α)` or the `α → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoopExtent {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopTrajectory {
    v: f64,
    tau: f64,
    alpha: LoopExtent,
}

impl LoopTrajectory {
    pub fn new(v: f64, tau: f64, alpha: LoopExtent) -> Result<Self> {
        require_positive("v", v)?;
        require_positive("tau", tau)?;
        if let LoopExtent::Finite(a) = alpha {
            require_positive("alpha", a)?;
        }
        Ok(Self { v, tau, alpha })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn alpha(&self) -> LoopExtent {
        self.alpha
    }

    fn finite_alpha(&self) -> Result<f64> {
        match self.alpha {
            LoopExtent::Finite(a) => Ok(a),
            LoopExtent::Infinite => Err(Error::Domain("operation needs a finite alpha".into())),
        }
    }

    /// Half-length `(α + 1)τ` of the support of `q`.
    pub fn half_support(&self) -> Result<f64> {
        Ok((self.finite_alpha()? + 1.0) * self.tau)
    }
}

/// `q(t)` in seconds.
pub fn loop_position(t: f64, traj: &LoopTrajectory) -> Result<f64> {
    let alpha = traj.finite_alpha()?;
    let tau = traj.tau;
    let end = (alpha + 1.0) * tau;
    let q = if t <= -end || t >= end {
        0.0
    } else if t < -tau {
        -tau - (t + tau) / alpha
    } else if t <= tau {
        t
    } else {
        tau - (t - tau) / alpha
    };
    Ok(q)
}

/// `dq/dt`, dimensionless (multiply by `v` for the plate velocity).
pub fn loop_velocity(t: f64, traj: &LoopTrajectory) -> Result<f64> {
    let alpha = traj.finite_alpha()?;
    let end = (alpha + 1.0) * traj.tau;
    Ok(if t.abs() >= end {
        0.0
    } else if t.abs() <= traj.tau {
        1.0
    } else {
        -1.0 / alpha
    })
}

/// `sin(xτ)/x`, with the `x → 0` limit `τ` taken when `|x|τ < 1e-8`.
fn sin_over(x: f64, tau: f64) -> f64 {
    if (x * tau).abs() < 1e-8 {
        tau
    } else {
        (x * tau).sin() / x
    }
}

/// Closed form of `Q̂(ω, −ω_v)`.
///
/// Finite `α`, with `κ = ω + ω_v/α`:
///
/// ```text
///   2(1 + 1/α)ω_v sin((ω − ω_v)τ) / (κ(ω − ω_v)) − 2(ω_v/α) sin(ω(1 + α)τ) / (κω)
/// ```
///
/// and for `α = ∞` the first term alone, `2ω_v sin((ω − ω_v)τ)/(ω(ω − ω_v))`.
pub fn qhat_closed_form(omega: f64, omega_v: f64, traj: &LoopTrajectory) -> Result<Complex64> {
    if omega_v == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("qhat needs a finite omega != 0, got {omega}")));
    }
    let tau = traj.tau;
    let value = match traj.alpha {
        LoopExtent::Infinite => 2.0 * omega_v * sin_over(omega - omega_v, tau) / omega,
        LoopExtent::Finite(alpha) => {
            let kappa = omega + omega_v / alpha;
            if kappa == 0.0 {
                return Err(Error::Domain(format!(
                    "qhat closed form excludes omega = -omega_v/alpha = {omega}"
                )));
            }
            let fast = 2.0 * (1.0 + 1.0 / alpha) * omega_v * sin_over(omega - omega_v, tau) / kappa;
            let slow = 2.0 * (omega_v / alpha) * (omega * (1.0 + alpha) * tau).sin() / (kappa * omega);
            fast - slow
        }
    };
    Ok(Complex64::new(value, 0.0))
}

/// `Q̂(ω, −ω_v)` by direct quadrature of its defining integral over the
/// support of `q`. Independent of [`qhat_closed_form`].
pub fn qhat_numeric(omega: f64, omega_v: f64, traj: &LoopTrajectory, spec: &QuadratureSpec) -> Result<Complex64> {
    let end = traj.half_support()?;
    if omega_v == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tau = traj.tau;
    let integrand = |t: f64| -> Complex64 {
        let q = loop_position(t, traj).unwrap_or(0.0);
        (Complex64::new(0.0, omega_v * q).exp() - 1.0) * Complex64::new(0.0, -omega * t).exp()
    };

    // Split into panels a few oscillation periods long so the adaptive rule
    // never has to discover the oscillation itself.
    let fastest = omega.abs() + omega_v.abs();
    let mut edges = Vec::new();
    for (a, b) in [(-end, -tau), (-tau, tau), (tau, end)] {
        let periods = (b - a) * fastest / (2.0 * PI);
        let n = (periods / 4.0).ceil().max(1.0) as usize;
        for i in 0..n {
            edges.push((a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64));
        }
    }

    // Panels share an absolute budget of rel_tol (the integrand is O(1)), so a
    // panel that is nearly zero does not have to meet a relative target.
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in edges {
        let spec = &spec.with_abs_tol(spec.abs_tol.max(spec.rel_tol * (b - a) / (2.0 * end)));
        let re = integrate_finite(|t| integrand(t).re, a, b, spec).map_err(|source| Error::Quadrature {
            stage: "qhat_numeric",
            source,
        })?;
        let im = integrate_finite(|t| integrand(t).im, a, b, spec).map_err(|source| Error::Quadrature {
            stage: "qhat_numeric",
            source,
        })?;
        total += Complex64::new(re.value, im.value);
    }
    Ok(total)
}

/// Finite-`τ` spectral weight `(ω/4)Σ_{n=±1} Q̂(−ω, nω_v)Q̂(ω, −nω_v)`,
/// which equals `(ω/4)Σ_n |Q̂(ω, −nω_v)|²` for a real trajectory.
pub fn finite_tau_kernel(omega: f64, omega_v: f64, traj: &LoopTrajectory) -> Result<f64> {
    let plus = qhat_closed_form(omega, omega_v, traj)?;
    let minus = qhat_closed_form(omega, -omega_v, traj)?;
    Ok(0.25 * omega * (plus.norm_sqr() + minus.norm_sqr()))
}

/// `τ → ∞` limit `I(ω) = πτ(ω_v²/ω)[δ(ω − ω_v) + δ(ω + ω_v)]`, held as an
/// amplitude and its two support points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKernel {
    omega_v: f64,
    tau: f64,
}

impl DeltaKernel {
    pub fn new(omega_v: f64, tau: f64) -> Result<Self> {
        require_positive("tau", tau)?;
        if !omega_v.is_finite() {
            return Err(Error::InvalidParameter(format!("omega_v must be finite, got {omega_v}")));
        }
        Ok(Self { omega_v, tau })
    }

    /// `πτω_v²`.
    pub fn amplitude(&self) -> f64 {
        PI * self.tau * self.omega_v * self.omega_v
    }

    /// `{+|ω_v|, −|ω_v|}`.
    pub fn support(&self) -> [f64; 2] {
        [self.omega_v.abs(), -self.omega_v.abs()]
    }

    /// `πτω_v²/ω`, the factor multiplying the delta functions at `omega`.
    pub fn prefactor_at(&self, omega: f64) -> f64 {
        self.amplitude() / omega
    }

    pub fn is_zero(&self) -> bool {
        self.omega_v == 0.0
    }

    /// `∫ I(ω) f(ω) dω` over the whole real line.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.support().iter().map(|&s| self.prefactor_at(s) * f(s)).sum()
    }

    /// `∫₀^∞ I(ω) f(ω) dω`, the form needed when `ω = ω_± ≥ 0`.
    pub fn integrate_positive<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s = self.omega_v.abs();
        self.prefactor_at(s) * f(s)
    }
}

/// Symbolic kernel at `omega`: the prefactor `πτω_v²/ω` and the support
/// points `±ω_v`.
pub fn delta_kernel_i(omega: f64, omega_v: f64, tau: f64) -> Result<(f64, [f64; 2])> {
    require_positive("omega", omega)?;
    let kernel = DeltaKernel::new(omega_v, tau)?;
    Ok((kernel.prefactor_at(omega), kernel.support()))
}

/// One row of the `δ`-sequence convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    /// `∫ K_τ(ω) g(ω) dω` over the test-function window.
    pub integral: f64,
    /// `πτω_v g(ω_v)`.
    pub prediction: f64,
    /// `|integral − prediction| / τ`.
    pub scaled_error: f64,
    /// Previous row's `scaled_error` over this one's.
    pub ratio: Option<f64>,
}

/// Integrates the finite-`τ` kernel against `g(ω) = exp(−(ω − ω_v)²/(2σ²))`
/// on `ω_v ± 10σ` for each `τ` and compares with the `δ`-limit.
pub fn delta_limit_study(
    omega_v: f64,
    width: f64,
    taus: &[f64],
    alpha: LoopExtent,
    spec: &QuadratureSpec,
) -> Result<Vec<ConvergenceRow>> {
    require_positive("width", width)?;
    let window = 10.0 * width;
    if omega_v != 0.0 && omega_v.abs() <= window {
        return Err(Error::Domain(format!(
            "test-function window ±{window} must stay clear of omega = 0 (omega_v = {omega_v})"
        )));
    }
    let center = omega_v.abs();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(taus.len());
    for &tau in taus {
        let traj = LoopTrajectory::new(1.0, tau, alpha)?;
        let (integral, prediction) = if omega_v == 0.0 {
            (0.0, 0.0)
        } else {
            let g = |w: f64| (-(w - center).powi(2) / (2.0 * width * width)).exp();
            let (a, b) = (center - window, center + window);
            let n = ((b - a) * tau / (4.0 * PI)).ceil().max(2.0) as usize;
            let tol = spec.with_abs_tol(spec.rel_tol * PI * tau * center / n as f64);
            let mut sum = 0.0;
            for i in 0..n {
                let lo = a + (b - a) * i as f64 / n as f64;
                let hi = a + (b - a) * (i + 1) as f64 / n as f64;
                let mut fault = None;
                let part = integrate_finite(
                    |w| match finite_tau_kernel(w, omega_v, &traj) {
                        Ok(k) => k * g(w),
                        Err(e) => {
                            fault.get_or_insert(e);
                            0.0
                        }
                    },
                    lo,
                    hi,
                    &tol,
                )
                .map_err(|source| Error::Quadrature {
                    stage: "delta_limit_study",
                    source,
                })?;
                if let Some(e) = fault {
                    return Err(e);
                }
                sum += part.value;
            }
            (sum, PI * tau * center * g(center))
        };
        let scaled_error = (integral - prediction).abs() / tau;
        let ratio = rows
            .last()
            .and_then(|prev| (scaled_error > 0.0).then(|| prev.scaled_error / scaled_error));
        rows.push(ConvergenceRow {
            tau,
            integral,
            prediction,
            scaled_error,
            ratio,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(tau: f64, alpha: f64) -> LoopTrajectory {
        LoopTrajectory::new(1.0, tau, LoopExtent::Finite(alpha)).unwrap()
    }

    #[test]
    fn position_branches() {
        let t = traj(10.0, 50.0);
        assert_eq!(loop_position(0.0, &t).unwrap(), 0.0);
        assert_eq!(loop_position(3.0, &t).unwrap(), 3.0);
        assert_eq!(loop_position(-510.0, &t).unwrap(), 0.0);
        assert_eq!(loop_position(510.0, &t).unwrap(), 0.0);
        assert_eq!(loop_position(1e4, &t).unwrap(), 0.0);
        // continuity at ±τ
        let eps = 1e-9;
        assert!((loop_position(10.0 + eps, &t).unwrap() - 10.0).abs() < 1e-8);
        assert!((loop_position(10.0 - eps, &t).unwrap() - 10.0).abs() < 1e-8);
        assert!((loop_position(-10.0 - eps, &t).unwrap() + 10.0).abs() < 1e-8);
        // close to the endpoints the slow leg is nearly home
        assert!((loop_position(510.0 - 1e-6, &t).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn position_needs_finite_alpha() {
        let t = LoopTrajectory::new(1.0, 1.0, LoopExtent::Infinite).unwrap();
        assert!(loop_position(0.0, &t).is_err());
    }

    #[test]
    fn loop_closes() {
        let t = traj(4.0, 25.0);
        let spec = QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-13);
        let end = t.half_support().unwrap();
        let mut total = 0.0;
        for (a, b) in [(-end, -4.0), (-4.0, 4.0), (4.0, end)] {
            total += integrate_finite(|x| loop_velocity(x, &t).unwrap(), a, b, &spec).unwrap().value;
        }
        assert!(total.abs() < 1e-12 * 8.0);
    }

    #[test]
    fn no_motion_no_transform() {
        for alpha in [LoopExtent::Finite(7.0), LoopExtent::Infinite] {
            let t = LoopTrajectory::new(1.0, 3.0, alpha).unwrap();
            for &w in &[-2.0, 0.0, 0.5, 4.0] {
                assert_eq!(qhat_closed_form(w, 0.0, &t).unwrap(), Complex64::new(0.0, 0.0));
            }
        }
        let t = traj(3.0, 7.0);
        assert_eq!(qhat_numeric(1.2, 0.0, &t, &QuadratureSpec::default()).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn closed_form_matches_pinned_value() {
        // Piecewise analytic transform evaluated independently.
        let t = traj(10.0, 50.0);
        let q = qhat_closed_form(1.3, 0.7, &t).unwrap();
        assert!((q.re - -0.504_068_510_040_673_4).abs() < 1e-12);
        assert_eq!(q.im, 0.0);
    }

    #[test]
    fn closed_form_matches_quadrature_on_grid() {
        let t = traj(10.0, 50.0);
        let spec = QuadratureSpec::default().with_rel_tol(1e-11);
        for w in [0.3, 0.9, 1.3, 2.1, 3.7] {
            for wv in [0.2, 0.7, 1.1, 1.9, 2.6] {
                let c = qhat_closed_form(w, wv, &t).unwrap();
                let n = qhat_numeric(w, wv, &t, &spec).unwrap();
                assert!((c - n).norm() < 1e-8 * c.norm(), "w={w} wv={wv}: {c} vs {n}");
            }
        }
    }

    #[test]
    fn removable_singularity_at_resonance() {
        let t = traj(5.0, 100.0);
        let q = qhat_closed_form(1.0, 1.0, &t).unwrap().re;
        // 2(1 + 1/α)τ/(1 + 1/α) − O(1/α)
        assert!((q - 10.0).abs() < 10.0 * 3.0 / 100.0);
        let near = qhat_closed_form(1.0, 1.0 - 1e-12, &t).unwrap().re;
        assert!((near - q).abs() < 1e-9);
    }

    #[test]
    fn infinite_alpha_small_omega_v_limit() {
        let t = LoopTrajectory::new(1.0, 2.0, LoopExtent::Infinite).unwrap();
        let (w, wv) = (1.7, 1e-7);
        let q = qhat_closed_form(w, wv, &t).unwrap().re;
        let lead = 2.0 * wv * (w * 2.0).sin() / (w * w);
        assert!((q - lead).abs() < 1e-6 * lead.abs());
    }

    #[test]
    fn excluded_points() {
        let t = traj(2.0, 4.0);
        assert!(qhat_closed_form(0.0, 1.0, &t).is_err());
        assert!(qhat_closed_form(-0.25, 1.0, &t).is_err());
    }

    #[test]
    fn delta_kernel_structure() {
        let k = DeltaKernel::new(0.8, 3.0).unwrap();
        assert_eq!(k.support(), [0.8, -0.8]);
        assert!((k.amplitude() - PI * 3.0 * 0.64).abs() < 1e-15);
        // ∫ I(ω)·ω dω = πτω_v²·2
        assert!((k.integrate(|w| w) - 2.0 * k.amplitude()).abs() < 1e-14);
        assert!((k.integrate_positive(|_| 1.0) - PI * 3.0 * 0.8).abs() < 1e-14);
        let zero = DeltaKernel::new(0.0, 3.0).unwrap();
        assert_eq!(zero.integrate(|_| 1.0), 0.0);
        let (pre, support) = delta_kernel_i(2.0, 0.8, 3.0).unwrap();
        assert!((pre - PI * 3.0 * 0.64 / 2.0).abs() < 1e-15);
        assert_eq!(support, [0.8, -0.8]);
        assert!(delta_kernel_i(0.0, 0.8, 3.0).is_err());
        assert!(delta_kernel_i(1.0, 0.8, 0.0).is_err());
    }

    #[test]
    fn delta_study_halves_error() {
        let rows = delta_limit_study(1.0, 0.05, &[100.0, 200.0, 400.0], LoopExtent::Infinite, &QuadratureSpec::default().with_rel_tol(1e-11)).unwrap();
        for r in &rows[1..] {
            let ratio = r.ratio.unwrap();
            assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
        }
    }

    #[test]
    fn delta_study_zero_velocity_row() {
        let rows = delta_limit_study(0.0, 0.05, &[10.0, 20.0], LoopExtent::Infinite, &QuadratureSpec::default()).unwrap();
        assert!(rows.iter().all(|r| r.integral == 0.0 && r.prediction == 0.0 && r.ratio.is_none()));
    }
}
