//! Machine-readable run reports.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One named check. Soft checks are reported but never change the exit code.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub soft: bool,
    pub evaluated: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), pass: true, soft: false, evaluated: 0, failures: 0, max_error: None, detail: None }
    }

    pub fn soft(name: &str) -> Self {
        Check { soft: true, ..Check::new(name) }
    }

    /// Records one evaluation; the first failure message is kept as the detail.
    pub fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.evaluated += 1;
        if !ok {
            self.failures += 1;
            self.pass = false;
            if self.detail.is_none() {
                self.detail = Some(msg());
            }
        }
    }

    pub fn error(&mut self, e: f64) {
        self.max_error = Some(self.max_error.map_or(e, |m| m.max(e)));
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Value, checks: Vec<Check>, result: Option<Value>) -> Self {
        let pass = checks.iter().all(|c| c.pass || c.soft);
        RunReport { schema: SCHEMA_VERSION, command: command.into(), parameters, checks, pass, result, wall_time_ms: None }
    }
}
