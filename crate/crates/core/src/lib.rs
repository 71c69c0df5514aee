//! Casimir friction between two parallel dielectric half-spaces.
//!
//! One plate is held at rest while the other runs a closed loop along `x`:
//! a slow drift away, a fast pass at velocity `v` for a time `2τ`, and a slow
//! return. Because the loop closes, the reversible interaction does no net
//! work and the energy dissipated per unit area, divided by `2τv`, is the
//! friction force. The same expression covers
//!
//! * the linear regime at finite temperature, `F ∝ v / d⁴`,
//! * the zero-temperature regime for Drude metals, `F ∝ v³ / d⁶`,
//! * arbitrary velocities through a nested `k`-space / frequency integral
//!   over `Im R(ω)`, with `R = (ε − 1)/(ε + 1)`.
//!
//! All quantities are SI internally. Electron-volt and nanometre inputs are
//! converted with the helpers in [`numerics`].

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
mod error;
pub mod friction;
pub mod geometry;
pub mod material;
pub mod numerics;
pub mod response;
pub mod trajectory;

pub use error::{Error, Result};
