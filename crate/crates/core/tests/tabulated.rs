//! The general pipeline driven by a permittivity table read from disk.

use std::io::Write;

use casimir_friction::friction::{dissipation_general, force_linear, Regime};
use casimir_friction::geometry::PlateConfig;
use casimir_friction::material::{eps_drude, Drude, MaterialModel, TabulatedPermittivity};
use casimir_friction::numerics::{ev_to_rad_per_s, QuadratureSpec};
use casimir_friction::response::ThermalState;
use casimir_friction::Error;

const RHO: f64 = 1e28;

fn silver() -> Drude {
    Drude::new(ev_to_rad_per_s(9.0), ev_to_rad_per_s(0.035)).unwrap()
}

/// Drude permittivity on `per_decade` log-spaced rows over `[lo, hi]`.
fn drude_table(lo: f64, hi: f64, per_decade: usize) -> tempfile::NamedTempFile {
    let d = silver();
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{}", TabulatedPermittivity::CSV_HEADER.join(",")).unwrap();
    for i in 0..=n {
        let w = lo * 10f64.powf(decades * i as f64 / n as f64);
        let e = eps_drude(w, &d).unwrap();
        writeln!(f, "{w:e},{:e},{:e}", e.re, e.im).unwrap();
    }
    f.flush().unwrap();
    f
}

fn load(f: &tempfile::NamedTempFile) -> MaterialModel {
    MaterialModel::tabulated(TabulatedPermittivity::from_csv_path(f.path()).unwrap())
}

#[test]
fn table_reproduces_analytic_drude() {
    let file = drude_table(1e10, 1e17, 50);
    let table = load(&file);
    let drude = MaterialModel::Drude(silver());
    let cfg = PlateConfig::new(1e-8, RHO, RHO).unwrap();
    let spec = QuadratureSpec::nested();
    // v = 1e4 m/s puts k_x v at ~1e12 rad/s, well inside the table
    for (thermal, v) in [
        (ThermalState::zero(), 1e4),
        (ThermalState::zero(), 1.0),
        (ThermalState::finite(300.0).unwrap(), 1e4),
        (ThermalState::finite(300.0).unwrap(), 1e-2),
    ] {
        let a = dissipation_general(&table, &table, &cfg, thermal, v, &spec).unwrap();
        let b = dissipation_general(&drude, &drude, &cfg, thermal, v, &spec).unwrap();
        assert_eq!(a.regime, Regime::GeneralNumeric);
        let err = (a.force_per_area / b.force_per_area - 1.0).abs();
        // linear interpolation in ln ω at 50 rows per decade: ~4e-4
        assert!(err < 1e-3, "{thermal:?} v={v}: {err:e}");
    }
}

#[test]
fn interpolation_error_is_second_order_in_row_spacing() {
    let drude = MaterialModel::Drude(silver());
    let cfg = PlateConfig::new(1e-8, RHO, RHO).unwrap();
    let spec = QuadratureSpec::nested().with_rel_tol(1e-8);
    let exact = dissipation_general(&drude, &drude, &cfg, ThermalState::zero(), 1e4, &spec).unwrap().force_per_area;
    let err = |per_decade| {
        let file = drude_table(1e10, 1e17, per_decade);
        let table = load(&file);
        let f = dissipation_general(&table, &table, &cfg, ThermalState::zero(), 1e4, &spec).unwrap().force_per_area;
        (f / exact - 1.0).abs()
    };
    let ratio = err(50) / err(100);
    assert!((ratio - 4.0).abs() < 0.4, "{ratio}");
}

#[test]
fn linear_regime_from_table_matches_general() {
    let file = drude_table(1e10, 1e17, 50);
    let table = load(&file);
    let cfg = PlateConfig::new(1e-8, RHO, RHO).unwrap();
    let hot = ThermalState::finite(300.0).unwrap();
    let v = 1e-3;
    let lin = force_linear(&table, &cfg, hot, v, &QuadratureSpec::default()).unwrap();
    let full = dissipation_general(&table, &table, &cfg, hot, v, &QuadratureSpec::nested()).unwrap();
    assert_eq!(lin.regime, Regime::LinearFiniteT);
    assert!((lin.force_per_area / full.force_per_area - 1.0).abs() < 1e-4);
}

#[test]
fn table_too_short_for_the_velocity_is_an_input_error() {
    // k_x v reaches ~1e15 rad/s at v = 1e7 m/s, beyond a table ending at 1e13
    let file = drude_table(1e10, 1e13, 50);
    let table = load(&file);
    let cfg = PlateConfig::new(1e-8, RHO, RHO).unwrap();
    let err = dissipation_general(&table, &table, &cfg, ThermalState::zero(), 1e7, &QuadratureSpec::nested()).unwrap_err();
    assert!(matches!(err, Error::OutOfTableRange { .. }), "{err}");
    assert!(!err.is_numerical());
}
