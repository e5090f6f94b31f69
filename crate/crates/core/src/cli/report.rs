use serde::Serialize;
use serde_json::Value;

/// Where the working precision came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionSource {
    Flag,
    Env,
    Default,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecisionInfo {
    pub digits: u32,
    pub source: PrecisionSource,
}

/// A measured value checked against a reference. Non-gating checks are
/// reported but never fail the run.
#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub gating: bool,
}

impl Validation {
    pub fn within(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Validation {
        Validation {
            name: name.into(),
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
            gating: true,
        }
    }

    pub fn informational(self) -> Validation {
        Validation { gating: false, ..self }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Everything needed to reproduce one run. Apart from `timing`, the JSON
/// rendering depends only on the command line, config and environment.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Value,
    pub precision: PrecisionInfo,
    pub seed: u64,
    pub results: Value,
    pub validations: Vec<Validation>,
    pub outputs: Vec<String>,
    pub timing: Timing,
}

impl RunReport {
    /// True when every gating validation passed.
    pub fn passed(&self) -> bool {
        self.validations.iter().filter(|v| v.gating).all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite or null");
        s.push('\n');
        s
    }
}
