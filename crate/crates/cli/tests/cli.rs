use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const DRUDE: [&str; 8] = ["--model", "drude", "--wp-ev", "9", "--nu-ev", "0.035", "--gap-nm", "10"];

fn casimir(args: &[&str]) -> Output {
    casimir_env(args, None)
}

fn casimir_env(args: &[&str], rtol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_casimir"));
    cmd.args(args).env_remove("CASIMIR_QUAD_RTOL");
    if let Some(r) = rtol {
        cmd.env("CASIMIR_QUAD_RTOL", r);
    }
    cmd.output().expect("binary runs")
}

fn drude(cmd: &'static str, extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&DRUDE);
    v.extend_from_slice(extra);
    v
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn linear_force_matches_pinned_value() {
    let doc = json(&casimir(&drude("force", &["--temp-k", "300", "--velocity", "1e-3"])));
    assert_eq!(doc["regime"], "LinearFiniteT");
    assert_eq!(doc["direction"], "opposes_motion");
    let f = doc["force_per_area_N_m2"].as_f64().unwrap();
    assert!((f / 3.2898076620324e-16 - 1.0).abs() < 1e-12, "{f}");
    assert_eq!(doc["delta_e_per_2tau_v_N_m2"], doc["force_per_area_N_m2"]);
    assert!(doc.get("meta").is_none());
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        drude("force", &["--temp-k", "zero", "--velocity", "1", "--regime", "general"]),
        drude("sweep", &["--temp-k", "300", "--velocity", "1e-3", "--param", "gap", "--from", "5", "--to", "50", "--points", "5"]),
        drude("spectrum", &["--points", "17"]),
    ] {
        let (a, b) = (casimir(&args), casimir(&args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(casimir(&drude("force", &["--temp-k", "300", "--velocity", "0"])).status.code(), Some(2));
    assert_eq!(casimir(&drude("force", &["--temp-k", "zero", "--velocity", "1", "--regime", "linear"])).status.code(), Some(2));
    assert_eq!(casimir(&["force", "--model", "plasmon", "--velocity", "1"]).status.code(), Some(2));
    let starved = drude(
        "force",
        &["--temp-k", "zero", "--velocity", "1", "--regime", "general", "--rtol", "1e-14", "--max-subdivisions", "1"],
    );
    let out = casimir(&starved);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn config_file_with_flag_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"model": "drude", "wp_ev": 9, "nu_ev": 0.035, "gap_nm": 10, "temp_k": 300, "velocity_m_s": 1e-3}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let base = json(&casimir(&["--config", path, "force"]));
    let f = base["force_per_area_N_m2"].as_f64().unwrap();
    assert!((f / 3.2898076620324e-16 - 1.0).abs() < 1e-12);
    // linear regime: F ∝ v
    let over = json(&casimir(&["--config", path, "force", "--velocity", "2e-3"]));
    let g = over["force_per_area_N_m2"].as_f64().unwrap();
    assert!((g / f - 2.0).abs() < 1e-12);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"model": "drude", "colour": "red"}}"#).unwrap();
    assert_eq!(casimir(&["--config", bad.path().to_str().unwrap(), "force"]).status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let args = drude("force", &["--temp-k", "zero", "--velocity", "1", "--regime", "general"]);
    let doc = json(&casimir_env(&args, Some("1e-4")));
    assert_eq!(doc["inputs"]["rel_tol"], 1e-4);
    let flag = [args.clone(), vec!["--rtol", "1e-8"]].concat();
    let doc = json(&casimir_env(&flag, Some("1e-4")));
    assert_eq!(doc["inputs"]["rel_tol"], 1e-8);
    assert_eq!(casimir_env(&args, Some("fast")).status.code(), Some(2));
}

#[test]
fn spectrum_table() {
    let (header, rows) = csv_rows(&casimir(&drude("spectrum", &["--from-ev", "1e-4", "--to-ev", "10", "--points", "50"])));
    assert_eq!(header, ["omega_rad_s", "eps_re", "eps_im", "im_R", "spectral_density"]);
    assert_eq!(rows.len(), 50);
    let w = col(&header, &rows, "omega_rad_s");
    assert!(w.windows(2).all(|p| p[1] > p[0]));
    let im_r = col(&header, &rows, "im_R");
    let eps_im = col(&header, &rows, "eps_im");
    assert!(im_r.iter().all(|x| *x <= 0.0) && eps_im.iter().all(|x| *x <= 0.0));
    // small-ω head: Im R ≈ −2νω/ω_p²
    let ev = 1.602176634e-19 / 1.054571817e-34;
    let (wp, nu) = (9.0 * ev, 0.035 * ev);
    assert!((im_r[0] / (-2.0 * nu * w[0] / (wp * wp)) - 1.0).abs() < 1e-3);

    let (h, rows) = csv_rows(&casimir(&["spectrum", "--model", "drude", "--wp-ev", "0", "--nu-ev", "0.035", "--points", "5"]));
    for name in ["im_R", "spectral_density", "eps_im"] {
        assert!(col(&h, &rows, name).iter().all(|x| *x == 0.0));
    }
}

#[test]
fn single_point_sweep() {
    let (h, rows) = csv_rows(&casimir(&drude(
        "sweep",
        &["--temp-k", "300", "--param", "velocity", "--from", "3e-3", "--to", "1", "--points", "1"],
    )));
    assert_eq!(rows.len(), 1);
    assert_eq!(col(&h, &rows, "velocity_m_s"), [3e-3]);
}

#[test]
fn sweep_slopes() {
    let (h, rows) = csv_rows(&casimir(&drude(
        "sweep",
        &["--temp-k", "300", "--velocity", "1e-3", "--param", "gap", "--from", "5", "--to", "50", "--points", "4"],
    )));
    for s in col(&h, &rows, "log_slope") {
        assert!((s + 4.0).abs() < 1e-9, "{s}");
    }
    let (h, rows) = csv_rows(&casimir(&drude(
        "sweep",
        &["--temp-k", "zero", "--param", "velocity", "--from", "0.1", "--to", "1", "--points", "4"],
    )));
    assert!(rows.iter().all(|r| r[3] == "ZeroT_Cubic"));
    for s in col(&h, &rows, "log_slope") {
        assert!((s - 3.0).abs() < 1e-9, "{s}");
    }
}

#[test]
fn sweep_output_ignores_thread_count() {
    let base = drude(
        "sweep",
        &["--temp-k", "zero", "--regime", "general", "--param", "velocity", "--from", "0.1", "--to", "10", "--points", "6"],
    );
    let one = casimir(&[base.clone(), vec!["--jobs", "1"]].concat());
    let four = casimir(&[base, vec!["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn dissipate_report() {
    let doc = json(&casimir(&["dissipate", "--points", "30"]));
    let profiles = doc["profiles"].as_array().unwrap();
    let still = profiles.iter().find(|p| p["omega_v_rad_s"] == 0.0).unwrap();
    assert!(still["kernel"].as_array().unwrap().iter().all(|k| k == 0.0));
    let moving = doc["delta_limit"].as_array().unwrap().iter().find(|s| s["omega_v_rad_s"] == 1.0).unwrap();
    for row in moving["rows"].as_array().unwrap().iter().skip(1) {
        let r = row["ratio"].as_f64().unwrap();
        assert!((r - 2.0).abs() < 0.2, "{r}");
    }
    let diffs: Vec<f64> = doc["alpha_convergence"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["max_abs_diff_from_infinite"].as_f64().unwrap())
        .collect();
    assert!(diffs.windows(2).all(|p| p[1] < p[0]), "{diffs:?}");
}

#[test]
fn tabulated_material_runs_general_pipeline() {
    let ev = 1.602176634e-19 / 1.054571817e-34;
    let (wp, nu) = (9.0 * ev, 0.035 * ev);
    let mut table = tempfile::NamedTempFile::new().unwrap();
    writeln!(table, "omega_rad_s,eps_re,eps_im").unwrap();
    for i in 0..=350 {
        let w = 1e10 * 10f64.powf(i as f64 / 50.0);
        let den = w * w + nu * nu;
        writeln!(table, "{w:e},{:e},{:e}", 1.0 - wp * wp / den, -wp * wp * nu / (w * den)).unwrap();
    }
    table.flush().unwrap();
    let path = table.path().to_str().unwrap();
    let args = ["force", "--model", "tabulated", "--table", path, "--gap-nm", "10", "--temp-k", "zero", "--velocity", "1"];
    let doc = json(&casimir(&args));
    assert_eq!(doc["regime"], "GeneralNumeric");
    let f = doc["force_per_area_N_m2"].as_f64().unwrap();
    let closed = json(&casimir(&drude("force", &["--temp-k", "zero", "--velocity", "1"])));
    let g = closed["force_per_area_N_m2"].as_f64().unwrap();
    assert!((f / g - 1.0).abs() < 1e-6, "{f} vs {g}");

    let (h, rows) = csv_rows(&casimir(&["spectrum", "--model", "tabulated", "--table", path, "--points", "7"]));
    let w = col(&h, &rows, "omega_rad_s");
    assert_eq!(w.first(), Some(&1e10));
    assert!((w[6] / 1e17 - 1.0).abs() < 1e-12);
}

#[test]
fn compare_passes_for_drude() {
    let doc = json(&casimir(&drude("compare", &["--temp-k", "300", "--velocity", "1e-3"])));
    assert_eq!(doc["all_checks_passed"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn meta_only_when_asked() {
    let args = [vec!["--meta"], drude("force", &["--temp-k", "300", "--velocity", "1e-3"])].concat();
    let doc = json(&casimir(&args));
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
}
