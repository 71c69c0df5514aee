use casimir_friction::numerics::QuadratureSpec;
use casimir_friction::trajectory::{
    delta_limit_study, finite_tau_kernel, qhat_closed_form, LoopExtent, LoopTrajectory,
};
use clap::Args;
use serde_json::{json, Value};

use crate::config::{invalid, CliError, Format, RunConfig};
use crate::force::{sweep_grid, Scale};
use crate::output::{fmt_float, json_document, Csv, Meta, Outcome};

/// Slow-leg factors reported in the `α → ∞` convergence column.
const ALPHA_LADDER: [f64; 8] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1000.0];

#[derive(Debug, Clone, Args)]
pub struct DissipateArgs {
    /// Sliding frequencies ω_v, rad/s.
    #[arg(long = "omega-v", value_delimiter = ',', default_value = "0,1")]
    pub omega_v: Vec<f64>,
    /// Half-duration of the fast leg, s.
    #[arg(long, default_value_t = 50.0)]
    pub tau: f64,
    /// Slow-leg factor, a number or "inf".
    #[arg(long, default_value = "50")]
    pub alpha: String,
    #[arg(long = "omega-min", default_value_t = 0.05)]
    pub omega_min: f64,
    #[arg(long = "omega-max", default_value_t = 3.0)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 300)]
    pub points: usize,
    /// Width σ of the Gaussian test function, rad/s.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    /// τ values of the convergence table, s.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,400,800")]
    pub taus: Vec<f64>,
}

fn parse_alpha(s: &str) -> Result<LoopExtent, CliError> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
        return Ok(LoopExtent::Infinite);
    }
    let a: f64 = s
        .parse()
        .map_err(|_| invalid(format!("alpha must be a number or \"inf\", got {s:?}")))?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {a}")));
    }
    Ok(LoopExtent::Finite(a))
}

fn alpha_json(a: LoopExtent) -> Value {
    match a {
        LoopExtent::Finite(x) => json!(x),
        LoopExtent::Infinite => json!("inf"),
    }
}

struct ProfileRow {
    omega: f64,
    qhat: f64,
    kernel: f64,
}

fn profile(omega_v: f64, grid: &[f64], traj: &LoopTrajectory) -> Result<Vec<ProfileRow>, CliError> {
    grid.iter()
        .map(|&w| {
            Ok(ProfileRow {
                omega: w,
                qhat: qhat_closed_form(w, omega_v, traj)?.re,
                kernel: finite_tau_kernel(w, omega_v, traj)?,
            })
        })
        .collect()
}

/// `max_ω |Q̂_α − Q̂_∞|` over the grid for each rung of [`ALPHA_LADDER`].
fn alpha_column(omega_v: f64, tau: f64, grid: &[f64]) -> Result<Vec<Value>, CliError> {
    let limit = LoopTrajectory::new(1.0, tau, LoopExtent::Infinite)?;
    ALPHA_LADDER
        .iter()
        .map(|&a| {
            let traj = LoopTrajectory::new(1.0, tau, LoopExtent::Finite(a))?;
            let mut worst = 0.0_f64;
            for &w in grid {
                let diff = (qhat_closed_form(w, omega_v, &traj)? - qhat_closed_form(w, omega_v, &limit)?).norm();
                worst = worst.max(diff);
            }
            Ok(json!({"alpha": a, "max_abs_diff_from_infinite": worst}))
        })
        .collect()
}

pub fn cmd_dissipate(cfg: &RunConfig, args: &DissipateArgs, meta: Option<&Meta>) -> Result<Outcome, CliError> {
    let alpha = parse_alpha(&args.alpha)?;
    let traj = LoopTrajectory::new(1.0, args.tau, alpha)?;
    if !(args.omega_min > 0.0 && args.omega_max >= args.omega_min) {
        return Err(invalid("profile grid needs 0 < omega-min <= omega-max"));
    }
    if args.omega_v.is_empty() {
        return Err(invalid("at least one omega-v is required"));
    }
    let grid = sweep_grid(args.omega_min, args.omega_max, args.points, Scale::Lin)?;
    let profiles = args
        .omega_v
        .iter()
        .map(|&wv| profile(wv, &grid, &traj).map(|rows| (wv, rows)))
        .collect::<Result<Vec<_>, _>>()?;

    if cfg.format() == Format::Csv {
        let mut csv = Csv::new(&["omega_v_rad_s", "omega_rad_s", "qhat", "qhat_abs2", "kernel"]);
        for (wv, rows) in &profiles {
            for r in rows {
                csv.row([
                    fmt_float(*wv),
                    fmt_float(r.omega),
                    fmt_float(r.qhat),
                    fmt_float(r.qhat * r.qhat),
                    fmt_float(r.kernel),
                ]);
            }
        }
        return Ok(Outcome::csv(csv.finish()));
    }

    let spec = cfg.quadrature(QuadratureSpec::DEFAULT_REL_TOL)?;
    let mut studies = Vec::new();
    for &wv in &args.omega_v {
        let rows = delta_limit_study(wv, args.width, &args.taus, alpha, &spec)?;
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "tau": r.tau,
                    "integral": r.integral,
                    "prediction": r.prediction,
                    "scaled_error": r.scaled_error,
                    "ratio": r.ratio,
                })
            })
            .collect();
        studies.push(json!({"omega_v_rad_s": wv, "width": args.width, "rows": rows}));
    }
    let alpha_convergence = match args.omega_v.iter().find(|w| **w != 0.0) {
        Some(&wv) => json!({"omega_v_rad_s": wv, "rows": alpha_column(wv, args.tau, &grid)?}),
        None => Value::Null,
    };
    let profiles: Vec<Value> = profiles
        .iter()
        .map(|(wv, rows)| {
            json!({
                "omega_v_rad_s": wv,
                "omega_rad_s": rows.iter().map(|r| r.omega).collect::<Vec<_>>(),
                "qhat": rows.iter().map(|r| r.qhat).collect::<Vec<_>>(),
                "qhat_abs2": rows.iter().map(|r| r.qhat * r.qhat).collect::<Vec<_>>(),
                "kernel": rows.iter().map(|r| r.kernel).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "inputs": {
            "omega_v_rad_s": args.omega_v,
            "tau_s": args.tau,
            "alpha": alpha_json(alpha),
            "omega_min_rad_s": args.omega_min,
            "omega_max_rad_s": args.omega_max,
            "points": args.points,
            "width_rad_s": args.width,
            "taus_s": args.taus,
            "rel_tol": spec.rel_tol,
        },
        "profiles": profiles,
        "alpha_convergence": alpha_convergence,
        "delta_limit": studies,
    });
    Ok(Outcome::ok(json_document(doc, meta)))
}
