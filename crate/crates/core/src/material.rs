//! Permittivity models, the surface response `R = (ε − 1)/(ε + 1)` and the
//! oscillator spectral density extracted from `Im R`.
//!
//! # Sign convention
//!
//! The Drude permittivity is `ε = 1 + ω_p²/(ξ(ξ + ν))` evaluated at `ξ = iω`.
//! With this choice a passive medium has `Im ε ≤ 0` and `Im R ≤ 0` for
//! `ω > 0`, and the spectral density carries an explicit minus sign:
//!
//! ```text
//! m²α_I(m²) = −Im R(ω) / (2π²ρ),   m = ħω
//! ```
//!
//! so that it comes out non-negative. Tabulated input uses the same
//! convention, which is also what the `spectrum` command writes.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::numerics::HBAR;

/// Fraction of `ħω_sp` below which the linear small-`m` Drude density is used.
pub const DEFAULT_SMALL_M_FRACTION: f64 = 0.1;

/// Free-electron permittivity with plasma frequency `omega_p` and damping
/// `nu`, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drude {
    omega_p: f64,
    nu: f64,
}

impl Drude {
    /// `omega_p = 0` is accepted and describes vacuum.
    pub fn new(omega_p: f64, nu: f64) -> Result<Self> {
        require_non_negative("omega_p", omega_p)?;
        require_non_negative("nu", nu)?;
        Ok(Self { omega_p, nu })
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Surface plasma frequency `ω_p/√2`, the pole of `R` for `ν = 0`.
    pub fn omega_sp(&self) -> f64 {
        self.omega_p / SQRT_2
    }

    /// `R(ω) = ω_sp² / (ω_sp² − ω² + iνω)`.
    fn response(&self, omega: f64) -> Result<Complex64> {
        let wsp2 = self.omega_sp() * self.omega_sp();
        let denom = Complex64::new(wsp2 - omega * omega, self.nu * omega);
        if denom.norm() == 0.0 {
            return Err(Error::SingularResponse { magnitude: 0.0 });
        }
        Ok(Complex64::new(wsp2, 0.0) / denom)
    }

    /// `Im R(ω) = −ω_sp²νω / ((ω_sp² − ω²)² + ν²ω²)`, free of the
    /// cancellation that `(ε − 1)/(ε + 1)` suffers for `ω ≪ ν`.
    fn im_response(&self, omega: f64) -> Result<f64> {
        let wsp2 = self.omega_sp() * self.omega_sp();
        let detune = wsp2 - omega * omega;
        let damping = self.nu * omega;
        let denom = detune * detune + damping * damping;
        if denom == 0.0 {
            if omega == 0.0 {
                return Ok(0.0);
            }
            return Err(Error::SingularResponse { magnitude: 0.0 });
        }
        Ok(-wsp2 * damping / denom)
    }
}

/// `ε(ω) = 1 + ω_p²/(iω(iω + ν))`.
pub fn eps_drude(omega: f64, model: &Drude) -> Result<Complex64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("eps_drude needs omega > 0, got {omega}")));
    }
    let xi = Complex64::new(0.0, omega);
    let wp2 = model.omega_p * model.omega_p;
    Ok(Complex64::new(1.0, 0.0) + wp2 / (xi * (xi + model.nu)))
}

/// `R = (ε − 1)/(ε + 1)`, evaluated as `1 − 2/(ε + 1)` so that `Im R`
/// keeps full relative precision when `|ε|` is large.
pub fn response_r(eps: Complex64) -> Result<Complex64> {
    let plus_one = eps + 1.0;
    let magnitude = plus_one.norm();
    if magnitude <= f64::EPSILON * eps.norm().max(1.0) {
        return Err(Error::SingularResponse { magnitude });
    }
    Ok(Complex64::new(1.0, 0.0) - 2.0 / plus_one)
}

#[derive(Debug, Deserialize)]
struct TableRecord {
    omega_rad_s: f64,
    eps_re: f64,
    eps_im: f64,
}

/// Complex permittivity sampled on a strictly increasing frequency grid.
///
/// Real and imaginary parts are interpolated linearly in `ln ω`. Frequencies
/// outside the table are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPermittivity {
    omega: Vec<f64>,
    eps: Vec<Complex64>,
}

impl TabulatedPermittivity {
    pub const CSV_HEADER: [&'static str; 3] = ["omega_rad_s", "eps_re", "eps_im"];

    pub fn new(omega: Vec<f64>, eps: Vec<Complex64>) -> Result<Self> {
        if omega.len() != eps.len() {
            return Err(Error::Table(format!(
                "{} frequencies but {} permittivity values",
                omega.len(),
                eps.len()
            )));
        }
        if omega.len() < 2 {
            return Err(Error::Table("at least two samples are required".into()));
        }
        for (i, (&w, e)) in omega.iter().zip(&eps).enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Table(format!("row {i}: omega must be positive, got {w}")));
            }
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::Table(format!("row {i}: permittivity is not finite")));
            }
            if e.im > 0.0 {
                return Err(Error::Table(format!(
                    "row {i}: Im eps = {} > 0 violates passivity (convention xi = i*omega, Im eps <= 0)",
                    e.im
                )));
            }
        }
        if let Some(i) = omega.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Table(format!("omega is not strictly increasing at row {}", i + 1)));
        }
        Ok(Self { omega, eps })
    }

    /// Parses `omega_rad_s,eps_re,eps_im` CSV. The header is mandatory and
    /// must match exactly.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Table(e.to_string()))?.clone();
        let found: Vec<&str> = headers.iter().collect();
        if found != Self::CSV_HEADER {
            return Err(Error::Table(format!(
                "expected header `{}`, found `{}`",
                Self::CSV_HEADER.join(","),
                found.join(",")
            )));
        }
        let mut omega = Vec::new();
        let mut eps = Vec::new();
        for (i, rec) in rdr.deserialize::<TableRecord>().enumerate() {
            let rec = rec.map_err(|e| Error::Table(format!("row {i}: {e}")))?;
            omega.push(rec.omega_rad_s);
            eps.push(Complex64::new(rec.eps_re, rec.eps_im));
        }
        Self::new(omega, eps)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn omega_range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    /// Table frequencies; the interpolant has a kink at each of them.
    pub fn nodes(&self) -> &[f64] {
        &self.omega
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.omega.iter().copied().zip(self.eps.iter().copied())
    }

    pub fn interpolate(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = self.omega_range();
        if !(omega >= min && omega <= max) {
            return Err(Error::OutOfTableRange { omega, min, max });
        }
        let hi = self.omega.partition_point(|&w| w < omega).max(1);
        let lo = hi - 1;
        if self.omega[hi] == omega {
            return Ok(self.eps[hi]);
        }
        let t = (omega.ln() - self.omega[lo].ln()) / (self.omega[hi].ln() - self.omega[lo].ln());
        Ok(self.eps[lo] * (1.0 - t) + self.eps[hi] * t)
    }
}

/// One `δ`-line of `Im R`: `Im R(ω) = −weight · δ(ω − omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaLine {
    pub omega: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    Drude(Drude),
    /// Undamped Drude metal reduced to its surface-plasmon line.
    PlasmonLine { omega_sp: f64 },
    Tabulated(Arc<TabulatedPermittivity>),
}

impl MaterialModel {
    pub fn drude(omega_p: f64, nu: f64) -> Result<Self> {
        Ok(Self::Drude(Drude::new(omega_p, nu)?))
    }

    pub fn plasmon_line(omega_sp: f64) -> Result<Self> {
        require_positive("omega_sp", omega_sp)?;
        Ok(Self::PlasmonLine { omega_sp })
    }

    pub fn tabulated(table: TabulatedPermittivity) -> Self {
        Self::Tabulated(Arc::new(table))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Drude(_) => "drude",
            Self::PlasmonLine { .. } => "plasmon",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// Frequencies where `Im R` has a derivative jump; integrals over `ω`
    /// split there.
    pub fn kinks(&self) -> &[f64] {
        match self {
            Self::Tabulated(t) => t.nodes(),
            _ => &[],
        }
    }

    pub fn as_drude(&self) -> Option<&Drude> {
        match self {
            Self::Drude(d) => Some(d),
            _ => None,
        }
    }

    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        match self {
            Self::Drude(d) => eps_drude(omega, d),
            Self::PlasmonLine { omega_sp } => {
                if !(omega > 0.0) {
                    return Err(Error::Domain(format!("permittivity needs omega > 0, got {omega}")));
                }
                let ratio = omega_sp / omega;
                Ok(Complex64::new(1.0 - 2.0 * ratio * ratio, 0.0))
            }
            Self::Tabulated(t) => t.interpolate(omega),
        }
    }

    pub fn response(&self, omega: f64) -> Result<Complex64> {
        match self {
            Self::Drude(d) => {
                if !(omega > 0.0) {
                    return Err(Error::Domain(format!("response needs omega > 0, got {omega}")));
                }
                d.response(omega)
            }
            _ => response_r(self.permittivity(omega)?),
        }
    }

    /// Continuous part of `Im R(ω)` for `ω ≥ 0`. For a plasmon line this is
    /// zero away from `ω_sp`; the line itself is returned by
    /// [`MaterialModel::delta_lines`].
    pub fn im_response(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!("Im R needs omega >= 0, got {omega}")));
        }
        match self {
            Self::Drude(d) => d.im_response(omega),
            Self::PlasmonLine { omega_sp } => {
                if omega == *omega_sp {
                    Err(Error::SingularResponse { magnitude: 0.0 })
                } else {
                    Ok(0.0)
                }
            }
            Self::Tabulated(t) => {
                // Im R is odd in ω, so below the first row it is continued
                // linearly through the origin, as for a Drude metal.
                let (min, _) = t.omega_range();
                if omega < min {
                    return Ok(response_r(t.interpolate(min)?)?.im * omega / min);
                }
                Ok(response_r(t.interpolate(omega)?)?.im)
            }
        }
    }

    /// `δ`-lines of `Im R`, non-empty only for [`MaterialModel::PlasmonLine`]:
    /// `Im R = −(π/2)·ω_sp·δ(ω − ω_sp)`.
    pub fn delta_lines(&self) -> Vec<DeltaLine> {
        match self {
            Self::PlasmonLine { omega_sp } => vec![DeltaLine {
                omega: *omega_sp,
                weight: 0.5 * PI * omega_sp,
            }],
            _ => Vec::new(),
        }
    }
}

/// A pointwise spectral density `m ↦ m²α_I(m²)` (m in joules, value in m³).
#[derive(Clone)]
pub struct ContinuousDensity {
    f: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
    kinks: Arc<[f64]>,
}

impl ContinuousDensity {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            kinks: Arc::new([]),
        }
    }

    /// Energies (joules) where the density has a derivative jump.
    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks.into();
        self
    }

    pub fn value(&self, m: f64) -> Result<f64> {
        (self.f)(m)
    }
}

impl fmt::Debug for ContinuousDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ContinuousDensity(..)")
    }
}

/// Oscillator spectral density `m²α_I(m²)` as a function of `m = ħω`.
#[derive(Debug, Clone)]
pub enum SpectralDensity {
    Continuous(ContinuousDensity),
    /// `m²α_I = slope · m`, trusted for `m ≤ m_max` (joules).
    DrudeSmallM { slope: f64, m_max: f64 },
    /// Sharp lines; `rho` converts the `Im R` weights to a density.
    DeltaLines { lines: Vec<DeltaLine>, rho: f64 },
}

impl SpectralDensity {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self::Continuous(ContinuousDensity::new(f))
    }

    pub fn drude_small_m(slope: f64, m_max: f64) -> Result<Self> {
        require_positive("slope D", slope)?;
        require_positive("m_max", m_max)?;
        Ok(Self::DrudeSmallM { slope, m_max })
    }

    /// Density at energy `m` (joules). The small-`m` form is evaluated
    /// beyond `m_max` as well; callers check [`SpectralDensity::cutoff`].
    pub fn value(&self, m: f64) -> Result<f64> {
        match self {
            Self::Continuous(c) => c.value(m),
            Self::DrudeSmallM { slope, .. } => Ok(slope * m),
            Self::DeltaLines { .. } => Err(Error::Domain(
                "a delta-line spectrum has no pointwise density; use the plasmon-line path".into(),
            )),
        }
    }

    /// Energies (joules) where a continuous density has a derivative jump.
    pub fn kinks(&self) -> &[f64] {
        match self {
            Self::Continuous(c) => &c.kinks,
            _ => &[],
        }
    }

    /// Energy (joules) above which the density is not trusted.
    pub fn cutoff(&self) -> Option<f64> {
        match self {
            Self::DrudeSmallM { m_max, .. } => Some(*m_max),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtractedSpectrum {
    pub density: SpectralDensity,
    /// Linear small-`m` form with the default cutoff, for Drude input only.
    pub small_m: Option<SpectralDensity>,
}

/// Linear head `m²α_I = D·m` of the Drude spectrum,
/// `D = ħν / (ρ(πħω_p)²)`. `m_max` defaults to `0.1·ħω_sp`.
pub fn drude_small_m(model: &Drude, rho: f64, m_max: Option<f64>) -> Result<SpectralDensity> {
    require_positive("rho", rho)?;
    require_positive("omega_p", model.omega_p)?;
    require_positive("nu", model.nu)?;
    let php = PI * HBAR * model.omega_p;
    let slope = HBAR * model.nu / (rho * php * php);
    let m_max = m_max.unwrap_or(DEFAULT_SMALL_M_FRACTION * HBAR * model.omega_sp());
    SpectralDensity::drude_small_m(slope, m_max)
}

/// Spectral density `m²α_I(m²) = −Im R(m/ħ)/(2π²ρ)` of a material with
/// oscillator number density `rho` (1/m³).
pub fn spectral_density_from_r(model: &MaterialModel, rho: f64) -> Result<ExtractedSpectrum> {
    require_positive("rho", rho)?;
    match model {
        MaterialModel::PlasmonLine { .. } => Ok(ExtractedSpectrum {
            density: SpectralDensity::DeltaLines {
                lines: model.delta_lines(),
                rho,
            },
            small_m: None,
        }),
        _ => {
            let small_m = match model {
                MaterialModel::Drude(d) if d.omega_p > 0.0 && d.nu > 0.0 => Some(drude_small_m(d, rho, None)?),
                _ => None,
            };
            let source = model.clone();
            let scale = 1.0 / (2.0 * PI * PI * rho);
            let kinks = model.kinks().iter().map(|w| HBAR * w).collect();
            let density = SpectralDensity::Continuous(
                ContinuousDensity::new(move |m| Ok(-source.im_response(m / HBAR)? * scale)).with_kinks(kinks),
            );
            Ok(ExtractedSpectrum { density, small_m })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ev_to_rad_per_s;

    fn silver_like() -> Drude {
        Drude::new(ev_to_rad_per_s(9.0), ev_to_rad_per_s(0.035)).unwrap()
    }

    #[test]
    fn drude_matches_direct_complex_arithmetic() {
        // 1 + ω_p²/(iω(iω+ν)) evaluated with 30-digit arithmetic.
        let eps = eps_drude(1e15, &Drude::new(1e16, 1e14).unwrap()).unwrap();
        assert!((eps.re - -98.009_900_990_099_01).abs() < 1e-12);
        assert!((eps.im - -9.900_990_099_009_901).abs() < 1e-13);
        let r = response_r(eps).unwrap();
        assert!((r.re - 1.020_403_913_353_130_6).abs() < 1e-14);
        assert!((r.im - -0.002_082_456_966_026_797).abs() < 1e-16);
    }

    #[test]
    fn drude_limits() {
        let d = silver_like();
        let far = eps_drude(1e22, &d).unwrap();
        assert!((far - 1.0).norm() < 1e-10);
        let vacuum = Drude::new(0.0, 1e14).unwrap();
        for &w in &[1e10, 1e15, 1e18] {
            assert_eq!(eps_drude(w, &vacuum).unwrap(), Complex64::new(1.0, 0.0));
        }
        assert!(matches!(eps_drude(0.0, &d), Err(Error::Domain(_))));
        assert!(matches!(eps_drude(-1.0, &d), Err(Error::Domain(_))));
    }

    #[test]
    fn response_limits() {
        assert_eq!(response_r(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let big = response_r(Complex64::new(1e12, -1e12)).unwrap();
        assert!((big - 1.0).norm() < 1e-11);
        assert!(matches!(
            response_r(Complex64::new(-1.0, 0.0)),
            Err(Error::SingularResponse { .. })
        ));
    }

    #[test]
    fn drude_response_paths_agree() {
        let d = silver_like();
        let model = MaterialModel::Drude(d);
        for &w in &[1e12, 1e14, 3e15, 9e15, 2e16] {
            let direct = response_r(eps_drude(w, &d).unwrap()).unwrap();
            let closed = model.response(w).unwrap();
            assert!((direct - closed).norm() < 1e-12 * closed.norm().max(1.0));
            let im = model.im_response(w).unwrap();
            assert!((im - direct.im).abs() <= 1e-9 * im.abs());
        }
    }

    #[test]
    fn drude_small_omega_slope() {
        // Series of Im R about ω = 0: −2νω/ω_p² + O(ω³).
        let d = silver_like();
        let model = MaterialModel::Drude(d);
        for &w in &[1e6, 1e9, 1e11] {
            let im = model.im_response(w).unwrap();
            let lead = -2.0 * d.nu() * w / (d.omega_p() * d.omega_p());
            assert!((im / lead - 1.0).abs() < 1e-8, "w={w}");
        }
    }

    #[test]
    fn small_m_slope_formula() {
        let d = silver_like();
        let rho = 1e28;
        let s = drude_small_m(&d, rho, None).unwrap();
        let SpectralDensity::DrudeSmallM { slope, m_max } = s else {
            panic!("expected small-m density")
        };
        assert!((slope - 2.732_580_006_155_121e-14).abs() / slope < 1e-13);
        assert!((m_max - 0.1 * HBAR * d.omega_sp()).abs() < 1e-30);

        let doubled = drude_small_m(&d, 2.0 * rho, None).unwrap();
        let SpectralDensity::DrudeSmallM { slope: half, .. } = doubled else {
            unreachable!()
        };
        assert_eq!(half, 0.5 * slope);
    }

    #[test]
    fn continuous_density_matches_small_m_head() {
        let d = silver_like();
        let spec = spectral_density_from_r(&MaterialModel::Drude(d), 1e28).unwrap();
        let small = spec.small_m.unwrap();
        let wsp = HBAR * d.omega_sp();
        for &frac in &[1e-6, 1e-4, 1e-3, 5e-3, 0.0099] {
            let m = frac * wsp;
            let full = spec.density.value(m).unwrap();
            let lin = small.value(m).unwrap();
            assert!(((full - lin) / lin).abs() < 0.01, "frac={frac}");
        }
        // At the default cutoff the linear head is within a few percent.
        let m = small.cutoff().unwrap();
        let rel = (spec.density.value(m).unwrap() / small.value(m).unwrap() - 1.0).abs();
        assert!(rel < 0.025, "{rel}");
    }

    #[test]
    fn passivity_on_log_grid() {
        let d = silver_like();
        let spec = spectral_density_from_r(&MaterialModel::Drude(d), 1e28).unwrap();
        let n = 400;
        for i in 0..=n {
            let w = d.omega_p() * 10f64.powf(-4.0 + 6.0 * i as f64 / n as f64);
            assert!(spec.density.value(HBAR * w).unwrap() >= 0.0);
        }
    }

    #[test]
    fn lossless_density_vanishes_off_resonance() {
        let d = Drude::new(ev_to_rad_per_s(9.0), 0.0).unwrap();
        let spec = spectral_density_from_r(&MaterialModel::Drude(d), 1e28).unwrap();
        for &frac in &[1e-3, 0.3, 0.9, 1.2, 10.0] {
            assert_eq!(spec.density.value(HBAR * frac * d.omega_sp()).unwrap(), 0.0);
        }
        assert!(spec.small_m.is_none());
    }

    #[test]
    fn plasmon_line_gives_delta_lines() {
        let m = MaterialModel::plasmon_line(1e16).unwrap();
        let spec = spectral_density_from_r(&m, 1e28).unwrap();
        match spec.density {
            SpectralDensity::DeltaLines { lines, rho } => {
                assert_eq!(rho, 1e28);
                assert_eq!(lines.len(), 1);
                assert_eq!(lines[0].omega, 1e16);
                assert!((lines[0].weight - 0.5 * PI * 1e16).abs() < 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(m.im_response(3e15).unwrap(), 0.0);
        assert!(m.im_response(1e16).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(Drude::new(-1.0, 0.0).is_err());
        assert!(Drude::new(1.0, f64::NAN).is_err());
        assert!(MaterialModel::plasmon_line(0.0).is_err());
        let d = silver_like();
        assert!(spectral_density_from_r(&MaterialModel::Drude(d), 0.0).is_err());
        assert!(drude_small_m(&Drude::new(0.0, 1e13).unwrap(), 1e28, None).is_err());
    }

    #[test]
    fn tabulated_csv_and_interpolation() {
        let csv = "omega_rad_s,eps_re,eps_im\n1e14,-100.0,-50.0\n1e15,-10.0,-5.0\n1e16,0.5,-0.1\n";
        let t = TabulatedPermittivity::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(t.omega_range(), (1e14, 1e16));
        assert_eq!(t.interpolate(1e15).unwrap(), Complex64::new(-10.0, -5.0));
        // Midpoint in ln ω between 1e14 and 1e15.
        let mid = t.interpolate(10f64.powf(14.5)).unwrap();
        assert!((mid - Complex64::new(-55.0, -27.5)).norm() < 1e-9);
        assert!(matches!(t.interpolate(5e13), Err(Error::OutOfTableRange { .. })));
        assert!(matches!(t.interpolate(2e16), Err(Error::OutOfTableRange { .. })));

        let m = MaterialModel::tabulated(t);
        let im = m.im_response(1e15).unwrap();
        let expect = response_r(Complex64::new(-10.0, -5.0)).unwrap().im;
        assert_eq!(im, expect);
        // linear continuation below the table, nothing above it
        let edge = response_r(Complex64::new(-100.0, -50.0)).unwrap().im;
        assert!((m.im_response(1e13).unwrap() - 0.1 * edge).abs() < 1e-15);
        assert_eq!(m.im_response(0.0).unwrap(), 0.0);
        assert!(m.permittivity(1e13).is_err());
        assert!(m.im_response(2e16).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_tables() {
        let wrong_header = "omega,eps_re,eps_im\n1,1,0\n2,1,0\n";
        assert!(TabulatedPermittivity::from_csv_reader(wrong_header.as_bytes()).is_err());
        let not_increasing = "omega_rad_s,eps_re,eps_im\n2,1,0\n2,1,0\n";
        assert!(TabulatedPermittivity::from_csv_reader(not_increasing.as_bytes()).is_err());
        let active = "omega_rad_s,eps_re,eps_im\n1,1,0.5\n2,1,0\n";
        assert!(TabulatedPermittivity::from_csv_reader(active.as_bytes()).is_err());
        let single = "omega_rad_s,eps_re,eps_im\n1,1,0\n";
        assert!(TabulatedPermittivity::from_csv_reader(single.as_bytes()).is_err());
    }
}
