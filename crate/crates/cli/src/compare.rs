use casimir_friction::compare::consistency_report;
use serde_json::json;

use crate::config::{invalid, CliError, Format, RunConfig};
use crate::output::{json_document, strip_nulls, Meta, Outcome};

/// The literature comparison report. Exit 3 when any check fails.
pub fn cmd_compare(cfg: &RunConfig, meta: Option<&Meta>) -> Result<Outcome, CliError> {
    if cfg.format() != Format::Json {
        return Err(invalid("compare writes JSON only"));
    }
    let material = cfg.material()?;
    let plates = cfg.plates()?;
    let thermal = cfg.thermal()?;
    let v = cfg.velocity()?;
    let report = consistency_report(&material, &plates, thermal, v)?;

    let inputs = strip_nulls(json!({
        "model": cfg.model,
        "wp_ev": cfg.wp_ev,
        "nu_ev": cfg.nu_ev,
        "gap_nm": cfg.gap_nm,
        "temp_k": cfg.temp_k,
        "velocity_m_s": v,
        "rho1": plates.rho1(),
        "rho2": plates.rho2(),
    }));
    let all_passed = report.all_passed();
    let warnings = report.validity_flags.iter().map(|f| format!("validity: {f}")).collect();
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    doc["inputs"] = inputs;
    doc["all_checks_passed"] = json!(all_passed);
    let mut out = crate::output::Outcome::ok(json_document(doc, meta)).with_warnings(warnings);
    if !all_passed {
        out.exit_code = 3;
        out.warnings.push("consistency checks failed".into());
    }
    Ok(out)
}
