use serde::Serialize;
use serde_json::Value;

use crate::config::TaskConfig;
use crate::Status;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Tool {
            name: "ordlab",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Outcome of one task. No wall-clock data is recorded, so identical runs
/// serialize identically.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub task: TaskConfig,
    pub seed: u64,
    pub strong_propagation: bool,
    pub ball_cap: usize,
    pub verdict: String,
    pub exit_code: i32,
    pub result: Value,
    pub notes: Vec<String>,
}

impl Report {
    pub fn status(&self) -> Status {
        match self.exit_code {
            0 => Status::Holds,
            1 => Status::Refuted,
            2 => Status::Inconclusive,
            3 => Status::Usage,
            _ => Status::Internal,
        }
    }
}

/// Pretty JSON with object keys sorted at every level.
pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // serde_json's default map is ordered by key
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
