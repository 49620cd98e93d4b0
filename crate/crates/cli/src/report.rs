use serde_json::{json, Map, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub cert: Option<i64>,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, cert: None, detail: detail.into() }
    }

    pub fn with_cert(mut self, cert: i64) -> Self {
        self.cert = Some(cert);
        self
    }
}

/// Checks in canonical order plus free-form result fields.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub fields: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn field(mut self, key: &str, v: Value) -> Self {
        self.fields.insert(key.to_string(), v);
        self
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.fields.clone();
        if !self.checks.is_empty() {
            let checks: Vec<Value> = self
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "status": if c.pass { "pass" } else { "fail" },
                        "cert": c.cert,
                        "detail": c.detail,
                    })
                })
                .collect();
            out.insert("checks".into(), Value::Array(checks));
            out.insert("status".into(), json!(if self.first_failure().is_some() { "fail" } else { "pass" }));
            if let Some(c) = self.first_failure() {
                out.insert("first_failure".into(), json!(c.name));
            }
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize"),
            Format::Text => {
                if self.checks.is_empty() && self.fields.is_empty() {
                    return "no checks run".into();
                }
                let mut s = String::new();
                for (k, v) in &self.fields {
                    let shown = match v {
                        Value::String(x) => x.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(s, "{k}: {shown}");
                }
                for c in &self.checks {
                    let cert = c.cert.map(|x| format!(" cert={x}")).unwrap_or_default();
                    let _ = writeln!(s, "{} {}{cert} {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
                }
                s.trim_end().to_string()
            }
        }
    }
}
