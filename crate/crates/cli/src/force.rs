use casimir_friction::friction::{
    dissipation_general, force_linear, force_plasmon, force_zero_t, linear_to_cubic_ratio, FrictionResult,
};
use casimir_friction::material::MaterialModel;
use casimir_friction::numerics::QuadratureSpec;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{invalid, CliError, Format, RegimeChoice, RunConfig, Temperature};
use crate::output::{fmt_float, json_document, strip_nulls, Csv, Meta, Outcome};

/// Auto selection: linear at or above this linear/cubic ratio.
pub const AUTO_LINEAR_RATIO: f64 = 100.0;
/// Auto selection: cubic at or below this ratio, full numerics in between.
pub const AUTO_CUBIC_RATIO: f64 = 0.01;

#[derive(Debug)]
pub struct ForceRun {
    pub result: FrictionResult,
    pub chosen: RegimeChoice,
    /// Linear/cubic force ratio when it drove an automatic choice.
    pub selection_ratio: Option<f64>,
    pub spec: QuadratureSpec,
    pub warnings: Vec<String>,
}

fn select(cfg: &RunConfig, material: &MaterialModel, d: f64, v: f64) -> Result<(RegimeChoice, Option<f64>), CliError> {
    let requested = cfg.regime();
    let temp = cfg.temperature()?;
    match requested {
        RegimeChoice::Linear if temp == Temperature::Zero => {
            Err(invalid("regime linear needs a finite temperature, got temp_k = zero"))
        }
        RegimeChoice::ZeroT if temp != Temperature::Zero => Err(invalid(format!(
            "regime zero-t contradicts temp_k = {temp}; pass --temp-k zero"
        ))),
        RegimeChoice::Auto => {
            if let MaterialModel::PlasmonLine { .. } = material {
                return Ok((RegimeChoice::Plasmon, None));
            }
            let drude = material.as_drude().is_some();
            if temp == Temperature::Zero {
                let r = if drude { RegimeChoice::ZeroT } else { RegimeChoice::General };
                return Ok((r, None));
            }
            let ratio = linear_to_cubic_ratio(d, cfg.thermal()?, v)?;
            let chosen = if ratio >= AUTO_LINEAR_RATIO {
                RegimeChoice::Linear
            } else if ratio <= AUTO_CUBIC_RATIO && drude {
                RegimeChoice::ZeroT
            } else {
                RegimeChoice::General
            };
            Ok((chosen, Some(ratio)))
        }
        other => Ok((other, None)),
    }
}

pub fn compute_force(cfg: &RunConfig) -> Result<ForceRun, CliError> {
    let material = cfg.material()?;
    let plates = cfg.plates()?;
    let v = cfg.velocity()?;
    let thermal = cfg.thermal()?;
    let (chosen, selection_ratio) = select(cfg, &material, plates.d(), v)?;
    let default_rtol = match chosen {
        RegimeChoice::General => QuadratureSpec::NESTED_REL_TOL,
        _ => QuadratureSpec::DEFAULT_REL_TOL,
    };
    let spec = cfg.quadrature(default_rtol)?;
    let mut warnings = Vec::new();

    let result = match chosen {
        RegimeChoice::Linear => force_linear(&material, &plates, thermal, v, &spec)?,
        RegimeChoice::ZeroT => {
            if !thermal.is_zero() {
                warnings.push(format!(
                    "temperature {} K treated as zero: linear/cubic ratio {:e} is below {AUTO_CUBIC_RATIO}",
                    cfg.temperature()?,
                    selection_ratio.unwrap_or(0.0)
                ));
            }
            force_zero_t(&material, &plates, v)?
        }
        RegimeChoice::General => dissipation_general(&material, &material, &plates, thermal, v, &spec)?,
        RegimeChoice::Plasmon => {
            let omega_sp = match &material {
                MaterialModel::PlasmonLine { omega_sp } => *omega_sp,
                MaterialModel::Drude(d) => d.omega_sp(),
                MaterialModel::Tabulated(_) => return Err(invalid("regime plasmon needs a drude or plasmon model")),
            };
            if !thermal.is_zero() {
                warnings.push("plasmon-line friction is evaluated at zero temperature".into());
            }
            force_plasmon(omega_sp, &plates, v, &spec)?
        }
        RegimeChoice::Auto => unreachable!("selection resolves auto"),
    };
    for flag in &result.diagnostics.validity_flags {
        warnings.push(format!("validity: {}", flag.as_str()));
    }
    Ok(ForceRun {
        result,
        chosen,
        selection_ratio,
        spec,
        warnings,
    })
}

fn inputs_json(cfg: &RunConfig, spec: &QuadratureSpec) -> Value {
    let mut shown = cfg.clone();
    shown.rho1 = Some(cfg.rho1.unwrap_or(crate::config::DEFAULT_DENSITY));
    shown.rho2 = Some(cfg.rho2.unwrap_or(crate::config::DEFAULT_DENSITY));
    shown.regime = Some(cfg.regime());
    shown.format = Some(cfg.format());
    shown.rel_tol = Some(spec.rel_tol);
    shown.max_subdivisions = Some(spec.max_subdivisions);
    strip_nulls(serde_json::to_value(shown).expect("config serializes"))
}

fn flags_joined(r: &FrictionResult) -> String {
    r.diagnostics
        .validity_flags
        .iter()
        .map(|f| f.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn cmd_force(cfg: &RunConfig, meta: Option<&Meta>) -> Result<Outcome, CliError> {
    let run = compute_force(cfg)?;
    let r = &run.result;
    let out = match cfg.format() {
        Format::Json => {
            let mut diagnostics = json!({
                "quadrature_rel_err": r.diagnostics.quadrature_rel_err,
                "validity_flags": r.diagnostics.validity_flags,
            });
            if let Some(x) = r.diagnostics.suppression_exponent {
                diagnostics["suppression_exponent"] = json!(x);
            }
            let doc = json!({
                "inputs": inputs_json(cfg, &run.spec),
                "force_per_area_N_m2": r.force_per_area,
                "delta_e_per_2tau_v_N_m2": r.delta_e_per_2tau_v,
                "direction": r.direction,
                "regime": r.regime.as_str(),
                "regime_selection": strip_nulls(json!({
                    "requested": cfg.regime(),
                    "chosen": run.chosen,
                    "linear_to_cubic_ratio": run.selection_ratio,
                })),
                "diagnostics": diagnostics,
            });
            Outcome::ok(json_document(doc, meta))
        }
        Format::Csv => {
            let mut csv = Csv::new(&[
                "regime",
                "force_per_area_N_m2",
                "delta_e_per_2tau_v_N_m2",
                "quadrature_rel_err",
                "validity_flags",
            ]);
            csv.row([
                r.regime.as_str().to_string(),
                fmt_float(r.force_per_area),
                fmt_float(r.delta_e_per_2tau_v),
                fmt_float(r.diagnostics.quadrature_rel_err),
                flags_joined(r),
            ]);
            Outcome::csv(csv.finish())
        }
    };
    Ok(out.with_warnings(run.warnings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Velocity,
    Gap,
    Temp,
}

impl SweepParam {
    fn column(&self) -> &'static str {
        match self {
            SweepParam::Velocity => "velocity_m_s",
            SweepParam::Gap => "gap_nm",
            SweepParam::Temp => "temp_k",
        }
    }

    fn apply(&self, cfg: &mut RunConfig, x: f64) {
        match self {
            SweepParam::Velocity => cfg.velocity_m_s = Some(x),
            SweepParam::Gap => cfg.gap_nm = Some(x),
            SweepParam::Temp => cfg.temp_k = Some(Temperature::Kelvin(x)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Lin,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// First grid value, in the parameter's flag units (m/s, nm, K).
    #[arg(long)]
    pub from: f64,
    /// Last grid value.
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "log")]
    pub scale: Scale,
    /// Worker threads; output order never depends on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

pub fn sweep_grid(from: f64, to: f64, points: usize, scale: Scale) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(invalid("points must be at least 1"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(invalid("sweep bounds must be finite"));
    }
    if scale == Scale::Log && !(from > 0.0 && to > 0.0) {
        return Err(invalid("log sweeps need positive bounds"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let s = i as f64 / last;
            match scale {
                Scale::Lin => from + (to - from) * s,
                Scale::Log => (from.ln() + (to.ln() - from.ln()) * s).exp(),
            }
        })
        .collect();
    grid[0] = from;
    grid[points - 1] = to;
    Ok(grid)
}

/// `d ln F / d ln x` by central differences, one-sided at the ends.
pub fn log_slopes(x: &[f64], f: &[f64]) -> Vec<Option<f64>> {
    let n = x.len();
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let lf: Vec<Option<f64>> = f.iter().map(|v| (*v > 0.0).then(|| v.ln())).collect();
    (0..n)
        .map(|i| {
            if n < 2 {
                return None;
            }
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            let (fa, fb) = (lf[a]?, lf[b]?);
            let dx = lx[b] - lx[a];
            (dx != 0.0 && dx.is_finite()).then(|| (fb - fa) / dx)
        })
        .collect()
}

pub fn cmd_sweep(cfg: &RunConfig, args: &SweepArgs) -> Result<Outcome, CliError> {
    if args.jobs == 0 {
        return Err(invalid("jobs must be at least 1"));
    }
    if cfg.format.is_some_and(|f| f != Format::Csv) {
        return Err(invalid("sweep writes CSV only"));
    }
    let grid = sweep_grid(args.from, args.to, args.points, args.scale)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    let runs: Vec<Result<ForceRun, CliError>> = pool.install(|| {
        grid.par_iter()
            .map(|&x| {
                let mut point = cfg.clone();
                args.param.apply(&mut point, x);
                compute_force(&point)
            })
            .collect()
    });
    let runs: Vec<ForceRun> = runs.into_iter().collect::<Result<_, _>>()?;
    let forces: Vec<f64> = runs.iter().map(|r| r.result.force_per_area).collect();
    let slopes = log_slopes(&grid, &forces);

    let mut csv = Csv::new(&[
        "index",
        args.param.column(),
        "force_per_area_N_m2",
        "regime",
        "quadrature_rel_err",
        "log_slope",
        "validity_flags",
    ]);
    let mut warnings = Vec::new();
    for (i, ((x, run), slope)) in grid.iter().zip(&runs).zip(&slopes).enumerate() {
        csv.row([
            i.to_string(),
            fmt_float(*x),
            fmt_float(run.result.force_per_area),
            run.result.regime.as_str().to_string(),
            fmt_float(run.result.diagnostics.quadrature_rel_err),
            slope.map(fmt_float).unwrap_or_default(),
            flags_joined(&run.result),
        ]);
        warnings.extend(run.warnings.iter().map(|w| format!("point {i}: {w}")));
    }
    Ok(Outcome::csv(csv.finish()).with_warnings(warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(sweep_grid(3.0, 9.0, 1, Scale::Log).unwrap(), vec![3.0]);
        let g = sweep_grid(1.0, 100.0, 3, Scale::Log).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(g[2], 100.0);
        assert_eq!(sweep_grid(0.0, 1.0, 3, Scale::Lin).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(sweep_grid(0.0, 1.0, 3, Scale::Log).is_err());
        assert!(sweep_grid(1.0, 2.0, 0, Scale::Lin).is_err());
    }

    #[test]
    fn slopes_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let f: Vec<f64> = x.iter().map(|v: &f64| 5.0 * v.powi(3)).collect();
        for s in log_slopes(&x, &f) {
            assert!((s.unwrap() - 3.0).abs() < 1e-12);
        }
        assert_eq!(log_slopes(&[1.0], &[2.0]), vec![None]);
        assert_eq!(log_slopes(&[1.0, 2.0], &[0.0, 1.0]), vec![None, None]);
    }
}
