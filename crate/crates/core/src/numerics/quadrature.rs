//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss rule nested in a 15-point Kronrod extension is applied to
//! each subinterval; the interval with the largest error estimate is bisected
//! until the summed estimate meets `max(abs_tol, rel_tol·|value|)`. The error
//! of each panel is rescaled as in QUADPACK's `qk15`.
//!
//! Semi-infinite ranges `[a, ∞)` are mapped onto `[0, 1)` with
//! `x = a + s·t/(1 − t)`, where `s` is the decay scale of the integrand. For
//! an exponential tail `e^{−x/s}` the transformed integrand stays smooth up
//! to `t = 1`. The Kronrod nodes are all interior, so `t = 1` is never
//! evaluated.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "no convergence after {subdivisions} subdivisions \
         (value {value:e}, error estimate {err_estimate:e})"
    )]
    NonConvergence {
        value: f64,
        err_estimate: f64,
        subdivisions: usize,
    },
    #[error("integrand is not finite at x = {at:e}")]
    NonFinite { at: f64 },
    #[error("invalid interval [{a:e}, {b:e}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature settings: {0}")]
    InvalidSpec(String),
}

/// Tolerances and limits for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Decay length of the integrand, in units of the integration variable.
    /// Only read by the semi-infinite routines.
    pub semi_infinite_decay_scale: f64,
}

impl QuadratureSpec {
    /// Default for one-dimensional integrals.
    pub const DEFAULT_REL_TOL: f64 = 1e-9;
    /// Default for the outer levels of nested 2D/3D integrals.
    pub const NESTED_REL_TOL: f64 = 1e-6;
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 4096;

    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self, QuadratureError> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            semi_infinite_decay_scale: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    pub fn with_decay_scale(mut self, scale: f64) -> Self {
        self.semi_infinite_decay_scale = scale;
        self
    }

    /// Settings for the outer level of a nested integral.
    pub fn nested() -> Self {
        Self::default().with_rel_tol(Self::NESTED_REL_TOL)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(QuadratureError::InvalidSpec(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(QuadratureError::InvalidSpec(format!(
                "abs_tol must be non-negative, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadratureError::InvalidSpec(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn validate_semi_infinite(&self) -> Result<(), QuadratureError> {
        self.validate()?;
        if !(self.semi_infinite_decay_scale > 0.0) || !self.semi_infinite_decay_scale.is_finite() {
            return Err(QuadratureError::InvalidSpec(format!(
                "semi_infinite_decay_scale must be positive, got {}",
                self.semi_infinite_decay_scale
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: 0.0,
            max_subdivisions: Self::DEFAULT_MAX_SUBDIVISIONS,
            semi_infinite_decay_scale: 1.0,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

impl Estimate {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            err_estimate: 0.0,
            subdivisions: 0,
            evaluations: 0,
        }
    }

    /// Error estimate relative to the value; zero for an exact zero.
    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            if self.err_estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.err_estimate / self.value.abs()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// Part of `err` that is pure roundoff, `50ε∫|f|`.
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gauss_kronrod_15<F, E>(f: &mut F, a: f64, b: f64) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64, E> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { at: x }.into())
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = 0.0;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * res_abs;
        err = err.max(floor);
    }

    Ok(Panel {
        a,
        b,
        value: result,
        err,
        floor,
    })
}

/// Adaptive integration of a fallible integrand over `[a, b]`.
///
/// Errors raised by the integrand are passed through unchanged, which lets
/// callers integrate table lookups or nested integrals without panicking.
pub fn try_integrate_finite<F, E>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    try_integrate_finite_with_breaks(f, a, b, &[], spec)
}

/// [`try_integrate_finite`] with the first panels split at `breaks`, the
/// points where the integrand has a kink (for example the rows of a linearly
/// interpolated table). Breaks outside `(a, b)` are ignored.
/// `max_subdivisions` counts bisections beyond those initial panels.
pub fn try_integrate_finite_with_breaks<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    spec.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::InvalidInterval { a, b }.into());
    }
    if a == b {
        return Ok(Estimate::zero());
    }

    let mut edges: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let (mut value, mut err, mut floor) = (0.0, 0.0, 0.0);
    let mut evaluations = 0;
    for pair in edges.windows(2) {
        let panel = gauss_kronrod_15(&mut f, pair[0], pair[1])?;
        evaluations += 15;
        value += panel.value;
        err += panel.err;
        floor += panel.floor;
        heap.push(panel);
    }
    let limit = spec.max_subdivisions + heap.len() - 1;

    loop {
        // Every panel at its roundoff floor: bisection cannot improve `value`,
        // which matters for integrals that cancel to zero.
        if err <= spec.abs_tol.max(spec.rel_tol * value.abs()) || err <= floor {
            break;
        }
        if heap.len() >= limit {
            return Err(QuadratureError::NonConvergence {
                value,
                err_estimate: err,
                subdivisions: heap.len(),
            }
            .into());
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel cannot be bisected further in floating point.
            heap.push(worst);
            return Err(QuadratureError::NonConvergence {
                value,
                err_estimate: err,
                subdivisions: heap.len(),
            }
            .into());
        }
        let left = gauss_kronrod_15(&mut f, worst.a, mid)?;
        let right = gauss_kronrod_15(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);

        // Running sums drift; resum occasionally.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
            floor = heap.iter().map(|p| p.floor).sum();
        }
    }

    let subdivisions = heap.len();
    let value = heap.iter().map(|p| p.value).sum();
    let err_estimate = heap.iter().map(|p| p.err).sum();
    Ok(Estimate {
        value,
        err_estimate,
        subdivisions,
        evaluations,
    })
}

/// Adaptive integration over `[a, b]`.
pub fn integrate_finite<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_finite(|x| Ok::<f64, QuadratureError>(f(x)), a, b, spec)
}

/// Integration over `[a, ∞)` through `x = a + s·t/(1 − t)`, with `s` taken
/// from [`QuadratureSpec::semi_infinite_decay_scale`].
pub fn try_integrate_semi_infinite<F, E>(f: F, a: f64, spec: &QuadratureSpec) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    try_integrate_semi_infinite_with_breaks(f, a, &[], spec)
}

/// [`try_integrate_semi_infinite`] with kinks at `breaks` (in `x`).
pub fn try_integrate_semi_infinite_with_breaks<F, E>(
    mut f: F,
    a: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    spec.validate_semi_infinite()?;
    if !a.is_finite() {
        return Err(QuadratureError::InvalidInterval { a, b: f64::INFINITY }.into());
    }
    let s = spec.semi_infinite_decay_scale;
    let mapped = |t: f64| -> Result<f64, E> {
        let one_minus = 1.0 - t;
        if one_minus <= 0.0 {
            return Ok(0.0);
        }
        let x = a + s * t / one_minus;
        if !x.is_finite() {
            return Ok(0.0);
        }
        let y = f(x)?;
        if y == 0.0 {
            return Ok(0.0);
        }
        Ok(y * s / (one_minus * one_minus))
    };
    let t_breaks: Vec<f64> = breaks.iter().filter(|x| **x > a).map(|x| (x - a) / (s + x - a)).collect();
    try_integrate_finite_with_breaks(mapped, 0.0, 1.0, &t_breaks, spec)
}

/// Integration over `[a, ∞)`; see [`try_integrate_semi_infinite`].
pub fn integrate_semi_infinite<F>(mut f: F, a: f64, spec: &QuadratureSpec) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok::<f64, QuadratureError>(f(x)), a, spec)
}
