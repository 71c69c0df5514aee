//! Quadrature, constants and unit conversions shared by every other module.

pub mod constants;
pub mod quadrature;

pub use constants::{
    beta_from_kelvin, ev_to_rad_per_s, m_to_nm, nm_to_m, rad_per_s_to_ev, rad_per_s_to_joule, PhysicalConstants, EV,
    HBAR, K_B, NM,
};
pub use quadrature::{
    integrate_finite, integrate_semi_infinite, try_integrate_finite, try_integrate_finite_with_breaks,
    try_integrate_semi_infinite, try_integrate_semi_infinite_with_breaks, Estimate, QuadratureError, QuadratureSpec,
};
