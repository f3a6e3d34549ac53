//! Configuration-driven frontend for `ordlab`.
//!
//! A run reads one [`TaskConfig`], executes it and produces a [`Report`]
//! whose canonical JSON form is byte-identical for identical inputs, plus
//! an exit status: 0 when the property holds or an enumeration completed,
//! 1 when it is refuted with a certificate, 2 when the answer is
//! inconclusive at the requested scale, 3 for usage errors and 4 for
//! internal errors.

mod config;
mod demo;
mod report;
mod tasks;

pub use config::{parse_config, validate, ConfigError, RandomSystems, SystemConfig, TaskConfig, TaskKind, SCHEMA};
pub use demo::{demo_counterexample, DemoParams, StageError};
pub use report::{canonical_json, Report, Tool};

use ordlab::{Group, GroupSpec};

pub const DEFAULT_SEED: u64 = 0x6f72_646c_6162;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds = 0,
    Refuted = 1,
    Inconclusive = 2,
    Usage = 3,
    Internal = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the seed in the config.
    pub seed: Option<u64>,
    pub workers: usize,
    pub strong_propagation: bool,
    pub ball_cap: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: None,
            workers: 1,
            strong_propagation: false,
            ball_cap: None,
        }
    }
}

impl RunOptions {
    pub(crate) fn group(&self, spec: &GroupSpec) -> ordlab::Result<Group> {
        match self.ball_cap {
            Some(cap) => Group::with_ball_cap(spec.clone(), cap),
            None => Group::new(spec.clone()),
        }
    }
}

/// Runs one task. Errors carry their exit status through [`status_of`].
pub fn run(config: &TaskConfig, opts: &RunOptions) -> anyhow::Result<Report> {
    validate(config)?;
    tasks::run(config, opts)
}

/// Exit status for an error returned by [`run`].
pub fn status_of(e: &anyhow::Error) -> Status {
    if e.downcast_ref::<ConfigError>().is_some() {
        return Status::Usage;
    }
    // a non-hyperbolic T is a bad parameter, not a defect
    if e.downcast_ref::<StageError>().is_some_and(|s| s.stage == "is_hyperbolic") {
        return Status::Usage;
    }
    let lib = e
        .downcast_ref::<ordlab::Error>()
        .or_else(|| e.downcast_ref::<StageError>().and_then(|s| s.source.downcast_ref::<ordlab::Error>()));
    match lib {
        Some(ordlab::Error::OracleDefect(_)) => Status::Internal,
        Some(_) => Status::Usage,
        None => Status::Internal,
    }
}
