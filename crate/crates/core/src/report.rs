//! Structured run reports printed by the command-line tool.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

/// Field order is fixed by declaration order and is part of the output format.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub max_residual: f64,
    pub details: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            status: Status::Pass,
            max_residual: 0.0,
            details: Vec::new(),
            result: None,
        }
    }

    /// Records a check. It passes iff `residual < tolerance`; a NaN residual fails.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut Self {
        let passed = residual < tolerance;
        if !passed {
            self.status = Status::Fail;
        }
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
        self.details.push(CheckResult {
            name: name.into(),
            passed,
            residual,
            tolerance,
        });
        self
    }

    pub fn set_result(&mut self, value: Value) -> &mut Self {
        self.result = Some(value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `key: value` lines, one check per line, result as compact JSON.
impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "status: {}", self.status)?;
        writeln!(f, "max_residual: {:e}", self.max_residual)?;
        for c in &self.details {
            writeln!(
                f,
                "check: {} {} residual={:e} tolerance={:e}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.residual,
                c.tolerance
            )?;
        }
        if let Some(result) = &self.result {
            writeln!(f, "result: {result}")?;
        }
        Ok(())
    }
}
