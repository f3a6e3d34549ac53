//! Task configuration files.

use std::fmt;
use std::path::PathBuf;

use ordlab::convexity::SubgroupSpec;
use ordlab::group::Letter;
use ordlab::indicability::Presentation;
use ordlab::order::OrderDescriptor;
use ordlab::GroupSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = include_str!("../schema/task_config.schema.json");

pub const MAX_RADIUS: usize = 12;
pub const MAX_N: u32 = 10_000;
pub const MAX_CHAIN_LEN: usize = 6;
pub const MAX_SYSTEM_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    EnumerateOrders,
    OpenSet,
    RefuteLo,
    CheckConradian,
    CheckRecurrent,
    Convexity,
    Poincare,
    Counterexample,
    Indicable,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string tag"))
    }
}

/// A finite system with weights written as exact fractions, e.g. "1/6".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub map: Vec<usize>,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSystems {
    pub count: usize,
    pub max_points: usize,
}

/// One task. Fields a task does not use must be absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    pub task: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderDescriptor>,
    /// Ball radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    /// Exponent bound N.
    #[serde(default, rename = "N", alias = "n", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_chain_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_witnesses: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_instances: Option<usize>,
    /// Elements are words in the generators: i for the i-th generator, −i
    /// for its inverse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<Letter>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_elements: Vec<Vec<Letter>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_systems: Option<RandomSystems>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presentations: Vec<Presentation>,
    /// Word in the matrix generators for the hyperbolic element T.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_word: Option<Vec<Letter>>,
    /// Half-width of the box searched for a certificate seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl TaskConfig {
    pub fn new(task: TaskKind) -> Self {
        TaskConfig {
            task,
            group: None,
            order: None,
            r: None,
            r_max: None,
            n: None,
            limit: None,
            max_nodes: None,
            max_chain_len: None,
            min_witnesses: None,
            max_instances: None,
            chain: None,
            extra_elements: Vec::new(),
            subgroup: None,
            system: None,
            return_set: None,
            random_systems: None,
            presentation: None,
            presentations: Vec::new(),
            t_word: None,
            bound: None,
            seed: None,
            output: None,
        }
    }
}

/// A configuration problem, located by its JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn parse_config(text: &str) -> Result<TaskConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: TaskConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        err(if path.is_empty() { "." } else { &path }, e.into_inner().to_string())
    })?;
    validate(&config)?;
    Ok(config)
}

/// Required fields per task and scale caps.
pub fn validate(c: &TaskConfig) -> Result<(), ConfigError> {
    use TaskKind::*;
    let needs_group = !matches!(c.task, Poincare | Counterexample | Indicable);
    if needs_group && c.group.is_none() {
        return Err(err("group", format!("required for task {}", c.task)));
    }
    if !needs_group && c.group.is_some() && c.task != Counterexample {
        return Err(err("group", format!("not used by task {}", c.task)));
    }
    match c.task {
        EnumerateOrders | OpenSet if c.r.is_none() => return Err(err("r", format!("required for task {}", c.task))),
        RefuteLo if c.r_max.is_none() => return Err(err("r_max", "required for task refute-lo")),
        CheckConradian | CheckRecurrent if c.order.is_none() => {
            return Err(err("order", format!("required for task {}", c.task)))
        }
        OpenSet => match &c.chain {
            None => return Err(err("chain", "required for task open-set")),
            Some(ch) if ch.len() < 2 => return Err(err("chain", "needs at least two elements")),
            _ => {}
        },
        Poincare => {
            if c.system.is_some() == c.random_systems.is_some() {
                return Err(err("system", "give exactly one of system and random_systems"));
            }
            if c.system.is_some() && c.return_set.is_none() {
                return Err(err("return_set", "required with system"));
            }
            if let Some(rs) = c.random_systems {
                if rs.count == 0 || rs.max_points == 0 || rs.max_points > MAX_SYSTEM_POINTS {
                    return Err(err(
                        "random_systems",
                        format!("count must be positive and max_points in 1..={MAX_SYSTEM_POINTS}"),
                    ));
                }
            }
        }
        Indicable if c.presentation.is_none() && c.presentations.is_empty() => {
            return Err(err("presentation", "required for task indicable"))
        }
        _ => {}
    }
    for (name, v) in [("r", c.r), ("r_max", c.r_max)] {
        if v.is_some_and(|v| v > MAX_RADIUS) {
            return Err(err(name, format!("at most {MAX_RADIUS}")));
        }
    }
    if c.n.is_some_and(|n| n == 0 || n > MAX_N) {
        return Err(err("N", format!("must lie in 1..={MAX_N}")));
    }
    if c.max_chain_len.is_some_and(|l| !(2..=MAX_CHAIN_LEN).contains(&l)) {
        return Err(err("max_chain_len", format!("must lie in 2..={MAX_CHAIN_LEN}")));
    }
    if c.min_witnesses == Some(0) {
        return Err(err("min_witnesses", "must be positive"));
    }
    if c.limit == Some(0) {
        return Err(err("limit", "must be positive"));
    }
    if c.bound.is_some_and(|b| !(1..=500).contains(&b)) {
        return Err(err("bound", "must lie in 1..=500"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_paths_in_errors() {
        let e = parse_config(r#"{"task": "refute-lo", "group": {"kind": "finite_cyclic", "modulus": "x"}}"#).unwrap_err();
        assert_eq!(e.path, "group");
        let e = parse_config(r#"{"task": "refute-lo", "group": {"kind": "finite_cyclic", "modulus": 5}}"#).unwrap_err();
        assert_eq!(e.path, "r_max");
        let e = parse_config(r#"{"task": "nope"}"#).unwrap_err();
        assert_eq!(e.path, "task");
        let e = parse_config(r#"{"task": "indicable", "presentation": {"generators": 1, "relators": [[2]]}}"#).unwrap_err();
        assert_eq!(e.path, "presentation");
        let e = parse_config(r#"{"task": "counterexample", "colour": 1}"#).unwrap_err();
        assert_eq!(e.path, "colour");
        parse_config(r#"{"task": "counterexample"}"#).unwrap();
    }

    #[test]
    fn schema_lists_every_field() {
        let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let mut full = TaskConfig::new(TaskKind::Indicable);
        full.group = Some(GroupSpec::KleinBottle);
        full.order = Some(OrderDescriptor::MagnusFree { degree: None });
        full.r = Some(1);
        full.r_max = Some(1);
        full.n = Some(1);
        full.limit = Some(1);
        full.max_nodes = Some(1);
        full.max_chain_len = Some(2);
        full.min_witnesses = Some(1);
        full.max_instances = Some(1);
        full.chain = Some(vec![]);
        full.extra_elements = vec![vec![1]];
        full.subgroup = Some(SubgroupSpec::Whole);
        full.system = Some(SystemConfig {
            map: vec![0],
            weights: vec!["1".into()],
            labels: None,
        });
        full.return_set = Some(vec![0]);
        full.random_systems = Some(RandomSystems { count: 1, max_points: 1 });
        full.presentation = Some(Presentation::free(1));
        full.presentations = vec![Presentation::free(1)];
        full.t_word = Some(vec![1]);
        full.bound = Some(1);
        full.seed = Some(1);
        full.output = Some("x".into());
        let value = serde_json::to_value(&full).unwrap();
        let fields: Vec<&String> = value.as_object().unwrap().keys().collect();
        let listed: Vec<&String> = props.keys().collect();
        assert_eq!(fields, listed);
        let tasks: Vec<String> = schema["properties"]["task"]["enum"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        for t in &tasks {
            serde_json::from_value::<TaskKind>(serde_json::Value::String(t.clone())).unwrap();
        }
        assert_eq!(tasks.len(), 9);
    }
}
