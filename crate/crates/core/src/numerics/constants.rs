//! CODATA constants and the unit conversions applied at the I/O boundary.
//!
//! Everything inside the crate is strict SI: metres, seconds, kelvin, joules
//! and angular frequencies in rad/s. Electron-volt energies and nanometre
//! lengths only appear in front ends and are converted through the helpers
//! below.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Electron volt, J.
pub const EV: f64 = 1.602_176_634e-19;
/// Nanometre, m.
pub const NM: f64 = 1e-9;

/// The constant set used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub ev: f64,
    pub nm: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_b: K_B,
        ev: EV,
        nm: NM,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Angular frequency (rad/s) of a photon energy given in eV: `ω = E·eV/ħ`.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * EV / HBAR
}

/// Energy in eV of an angular frequency in rad/s.
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / EV
}

/// Energy in joules of an angular frequency, `m = ħω`.
pub fn rad_per_s_to_joule(omega: f64) -> f64 {
    omega * HBAR
}

pub fn nm_to_m(length_nm: f64) -> f64 {
    length_nm * NM
}

pub fn m_to_nm(length_m: f64) -> f64 {
    length_m / NM
}

/// Inverse thermal energy `β = 1/(k_B T)` in 1/J.
pub fn beta_from_kelvin(temperature: f64) -> f64 {
    1.0 / (K_B * temperature)
}
