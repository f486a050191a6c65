//! Report assembly and serialization.

use std::io::Write;

use serde_json::{json, Value};
use tl2b::report::Audit;
use tl2b::{Error, Scalar};

use crate::commands::Outcome;
use crate::config::{Backend, Format, RunConfig};

/// Version tag of the report layout.
pub const SCHEMA: &str = "tl2b/1";

fn header(cfg: &RunConfig) -> Value {
    json!({
        "schema": SCHEMA,
        "version": tl2b::VERSION,
        "command": cfg.command.to_string(),
        "config": {
            "n": cfg.n,
            "seed": cfg.seed,
            "bound": cfg.bound,
            "theta": cfg.theta.render(),
            "backend": match cfg.backend { Backend::Numeric => "numeric", Backend::Symbolic => "symbolic" },
        },
    })
}

pub fn report(cfg: &RunConfig, outcome: &Outcome) -> Value {
    let mut r = header(cfg);
    let failed = outcome.audit.failures().count();
    r["param_point"] = outcome.point.as_ref().map_or(Value::Null, |p| p.to_json());
    r["tbar"] = outcome.tbar.as_ref().map_or(Value::Null, |t| Value::String(t.render()));
    r["status"] = json!(if failed == 0 { "pass" } else { "fail" });
    r["checked"] = json!(outcome.audit.len());
    r["failed"] = json!(failed);
    r["first_failure"] = outcome.audit.first_failure().map_or(Value::Null, |f| serde_json::to_value(f).expect("serializable"));
    r["audit"] = serde_json::to_value(&outcome.audit.entries).expect("serializable");
    r["data"] = outcome.data.clone();
    r
}

pub fn error_report(cfg: &RunConfig, err: &Error) -> Value {
    let mut r = header(cfg);
    r["status"] = json!("error");
    r["error"] = json!(err.to_string());
    r
}

pub fn emit(cfg: &RunConfig, report: &Value) -> std::io::Result<()> {
    let bytes = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_bytes(report)?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(&bytes),
    }
}

/// Header lines as `# key: value`, then the audit table.
fn csv_bytes(report: &Value) -> std::io::Result<Vec<u8>> {
    let mut out = Vec::new();
    for key in ["schema", "version", "command", "config", "param_point", "tbar", "status", "error"] {
        if let Some(v) = report.get(key) {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(out, "# {key}: {text}")?;
        }
    }
    let audit: Audit =
        report.get("audit").map_or_else(Audit::new, |a| Audit { entries: serde_json::from_value(a.clone()).expect("audit entries") });
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["identity_id", "reference", "status", "max_abs_deviation"])?;
    for e in &audit.entries {
        let status = if e.passed() { "pass" } else { "fail" };
        w.write_record([e.identity_id.as_str(), e.reference.as_str(), status, e.max_abs_deviation.as_str()])?;
    }
    w.into_inner().map_err(|e| e.into_error())
}
