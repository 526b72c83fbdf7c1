use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Input {
    pub series: String,
    pub rank: usize,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub margin: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, margin: f64) -> Self {
        Self { name: name.into(), pass, margin: margin.is_finite().then_some(margin) }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), pass, margin: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub cache: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: Option<Input>,
    pub payload: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = Report {
            schema_version: SCHEMA_VERSION,
            command: "picard".into(),
            input: Some(Input { series: "A".into(), rank: 1, level: 4 }),
            payload: serde_json::json!({"group": "Z2", "twists": ["0/1", "1/1"]}),
            checks: vec![Check::new("quadratic", true, 0.0), Check::new("x", false, f64::INFINITY)],
            timing: None,
        };
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with("{\"schemaVersion\":1,\"command\":\"picard\""));
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }
}
