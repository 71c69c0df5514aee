use casimir_friction::material::{spectral_density_from_r, MaterialModel, SpectralDensity};
use casimir_friction::numerics::{ev_to_rad_per_s, HBAR};
use clap::Args;

use crate::config::{invalid, CliError, RunConfig, DEFAULT_DENSITY};
use crate::force::{sweep_grid, Scale};
use crate::output::{fmt_float, Csv, Outcome};

pub const HEADER: [&str; 5] = ["omega_rad_s", "eps_re", "eps_im", "im_R", "spectral_density"];

const DEFAULT_FROM_EV: f64 = 1e-3;
const DEFAULT_TO_EV: f64 = 20.0;

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Lowest photon energy of the grid, eV (default: table start or 1e-3).
    #[arg(long = "from-ev")]
    pub from_ev: Option<f64>,
    /// Highest photon energy of the grid, eV (default: table end or 20).
    #[arg(long = "to-ev")]
    pub to_ev: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

/// Log-spaced table of `ε(ω)`, `Im R(ω)` and `S(ħω) = −Im R/(2π²ρ₁)`.
/// The sign convention gives `Im ε ≤ 0` and `Im R ≤ 0` for lossy media.
pub fn cmd_spectrum(cfg: &RunConfig, args: &SpectrumArgs) -> Result<Outcome, CliError> {
    let material = cfg.material()?;
    let (table_lo, table_hi) = match &material {
        MaterialModel::Tabulated(t) => t.omega_range(),
        _ => (ev_to_rad_per_s(DEFAULT_FROM_EV), ev_to_rad_per_s(DEFAULT_TO_EV)),
    };
    let lo = args.from_ev.map(ev_to_rad_per_s).unwrap_or(table_lo);
    let hi = args.to_ev.map(ev_to_rad_per_s).unwrap_or(table_hi);
    if !(lo > 0.0 && hi >= lo) {
        return Err(invalid(format!("spectrum range must satisfy 0 < from <= to, got [{lo:e}, {hi:e}] rad/s")));
    }
    let grid = sweep_grid(lo, hi, args.points, Scale::Log)?;
    let rho = cfg.rho1.unwrap_or(DEFAULT_DENSITY);
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid(format!("rho1 must be positive, got {rho}")));
    }
    let density = spectral_density_from_r(&material, rho)?.density;

    let mut csv = Csv::new(&HEADER);
    for w in grid {
        let eps = material.permittivity(w)?;
        let im_r = material.im_response(w)?;
        let s = match &density {
            SpectralDensity::DeltaLines { .. } => 0.0,
            d => d.value(HBAR * w)?,
        };
        csv.row([fmt_float(w), fmt_float(eps.re), fmt_float(eps.im), fmt_float(im_r), fmt_float(s)]);
    }
    Ok(Outcome::csv(csv.finish()))
}
