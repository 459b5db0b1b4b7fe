//! Structured records of numerical identity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Version of the JSON layout written by [`VerificationReport`].
pub const SCHEMA_VERSION: u32 = 1;

/// One named check. `passed` is `residual ≤ tolerance`, and `params` holds
/// everything needed to rerun it, seed included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub check_name: String,
    pub params: BTreeMap<String, Value>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: String,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            check_name: check_name.into(),
            params: BTreeMap::new(),
            residual,
            tolerance,
            // NaN residuals fail.
            passed: residual <= tolerance,
            notes: String::new(),
        }
    }

    /// A check that could not be carried out at all.
    pub fn failed(check_name: impl Into<String>, tolerance: f64, reason: impl std::fmt::Display) -> Self {
        let mut r = Self::new(check_name, f64::INFINITY, tolerance);
        r.notes = format!("error: {reason}");
        r
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }
}

/// Serializes with infinities and NaN written as strings, which plain JSON
/// cannot represent.
pub fn to_json(reports: &[VerificationReport]) -> String {
    let values: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("report serializes");
            if let Value::Object(map) = &mut v {
                for key in ["residual", "tolerance"] {
                    let x = if key == "residual" { r.residual } else { r.tolerance };
                    if !x.is_finite() {
                        map.insert(key.to_string(), Value::String(format!("{x}")));
                    }
                }
            }
            v
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&values).expect("json");
    s.push('\n');
    s
}
