use thiserror::Error;

use crate::numerics::QuadratureError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outside the domain of the operation: {0}")]
    Domain(String),

    #[error("surface response is singular: |eps + 1| = {magnitude:e}")]
    SingularResponse { magnitude: f64 },

    #[error("|omega_v| = {omega_v:e} rad/s exceeds the spectrum validity cutoff {cutoff:e} rad/s")]
    SpectrumCutoffExceeded { omega_v: f64, cutoff: f64 },

    #[error("operation requires equal densities, got rho1 = {rho1:e} and rho2 = {rho2:e}")]
    UnequalDensities { rho1: f64, rho2: f64 },

    #[error("frequency {omega:e} rad/s outside tabulated range [{min:e}, {max:e}]")]
    OutOfTableRange { omega: f64, min: f64, max: f64 },

    #[error("tabulated permittivity: {0}")]
    Table(String),

    #[error("quadrature failed ({stage}): {source}")]
    Quadrature {
        stage: &'static str,
        #[source]
        source: QuadratureError,
    },
}

impl Error {
    /// Failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::SingularResponse { .. })
    }

    pub(crate) fn at_stage(stage: &'static str) -> impl Fn(Error) -> Error {
        move |e| match e {
            // keep labels set by an inner stage
            Error::Quadrature { stage: "integral", source } => Error::Quadrature { stage, source },
            other => other,
        }
    }
}

impl From<QuadratureError> for Error {
    fn from(source: QuadratureError) -> Self {
        Error::Quadrature {
            stage: "integral",
            source,
        }
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be non-negative and finite, got {value}")))
    }
}
