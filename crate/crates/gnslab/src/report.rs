//! Run and suite reports (`gnslab-report/1`) and their text summaries.

use std::io::IsTerminal;

use gnslab_core::{Error, ToleranceConfig};
use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "gnslab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub op: &'static str,
    pub status: Status,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    /// Built-in checks and `expect` entries that did not hold.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub backend: &'static str,
    pub tolerances: Value,
    pub status: Status,
    pub counts: Counts,
    pub records: Vec<Record>,
}

pub fn tolerances_json(tol: &ToleranceConfig) -> Value {
    json!({"rank_tol": tol.rank_tol, "psd_tol": tol.psd_tol, "spec_tol": tol.spec_tol})
}

impl RunReport {
    pub fn new(backend: &'static str, tol: &ToleranceConfig, records: Vec<Record>) -> Self {
        let mut counts = Counts::default();
        for r in &records {
            match r.status {
                Status::Pass => counts.pass += 1,
                Status::Fail => counts.fail += 1,
                Status::Error => counts.error += 1,
            }
        }
        let status = if counts.fail + counts.error == 0 { Status::Pass } else { Status::Fail };
        RunReport {
            schema: REPORT_SCHEMA,
            kind: "run",
            backend,
            tolerances: tolerances_json(tol),
            status,
            counts,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let label = r.name.as_deref().unwrap_or(r.op);
            out.push_str(&format!("{} {label} ({}) {:.1} ms\n", paint(r.status), r.op, r.wall_ms));
            if let Some(e) = &r.error {
                out.push_str(&format!("    error: {}\n", e["message"].as_str().unwrap_or("?")));
            }
            for f in &r.failures {
                out.push_str(&format!("    {f}\n"));
            }
        }
        let c = &self.counts;
        out.push_str(&format!("{} passed, {} failed, {} errors\n", c.pass, c.fail, c.error));
        out
    }
}

/// Status label, colored when writing to a terminal and `NO_COLOR` is unset.
pub fn paint(s: Status) -> String {
    let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    if !color {
        return format!("[{}]", s.label());
    }
    let code = match s {
        Status::Pass => 32,
        Status::Fail => 31,
        Status::Error => 33,
    };
    format!("[\x1b[{code}m{}\x1b[0m]", s.label())
}

/// The variant name of a domain error plus any index it carries.
pub fn error_json(e: &Error) -> Value {
    let debug = format!("{e:?}");
    let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let witness = match e {
        Error::NotStarLinear(i)
        | Error::NotStarPreserving(i)
        | Error::PullbackMismatch(i)
        | Error::NotStochastic(i)
        | Error::NotComposable(i) => json!(i),
        Error::NotMultiplicative(i, j) | Error::NotPositiveMap(i, j) => json!([i, j]),
        Error::MissingArrow(a, b) => json!([a, b]),
        Error::DimensionMismatch { expected, found } => json!({"expected": expected, "found": found}),
        _ => Value::Null,
    };
    let mut v = json!({"kind": kind, "message": e.to_string()});
    if !witness.is_null() {
        v["witness"] = witness;
    }
    v
}
