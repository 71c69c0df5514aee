use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

/// What a subcommand hands back to `main`.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub exit_code: u8,
    /// CSV documents have nowhere to put run metadata.
    pub is_csv: bool,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            warnings: Vec::new(),
            exit_code: 0,
            is_csv: false,
        }
    }

    pub fn csv(stdout: String) -> Self {
        Self {
            is_csv: true,
            ..Self::ok(stdout)
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

/// Shortest round-trip scientific notation; `-0` prints as `0e0`.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:e}")
}

#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Self::default();
        csv.line(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        self.line(fields);
    }

    fn line<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let joined: Vec<String> = fields.into_iter().collect();
        self.buf.push_str(&joined.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Run metadata, only emitted under `--meta`.
#[derive(Debug, Clone, Copy)]
pub struct Meta {
    started: Instant,
}

impl Meta {
    pub fn start() -> Self {
        Self { started: Instant::now() }
    }

    pub fn to_json(self) -> Value {
        let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "elapsed_s": self.started.elapsed().as_secs_f64(),
            "unix_time_s": unix,
        })
    }
}

pub fn json_document(mut doc: Value, meta: Option<&Meta>) -> String {
    if let (Some(m), Value::Object(map)) = (meta, &mut doc) {
        map.insert("meta".into(), m.to_json());
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Drops `null` members so that unset options do not clutter `inputs`.
pub fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.into_iter()
                .filter(|(_, v)| !v.is_null())
                .map(|(k, v)| (k, strip_nulls(v)))
                .collect(),
        ),
        other => other,
    }
}
