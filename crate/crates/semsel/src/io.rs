//! JSON wire formats and file handling for the CLI.
//!
//! Instance files: `{"capacity": number, "groups": [[{"weight", "value"}]]}`.
//! Solution files: `{"status": "feasible"|"infeasible", "choices": [item
//! index per group], "total_value", "total_weight"}`. Scenario files use the
//! serde form of [`crate::scenario::Scenario`]. All numbers are base SI.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knapsack::{Choice, Instance, InstanceError, Item, Solution, SolveOutcome};
use crate::scenario::{Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    BadInstance(#[from] InstanceError),
    #[error("{0}")]
    BadScenario(#[from] ScenarioError),
    #[error("cannot tell whether the file is a scenario or an instance; expected either `groups`+`capacity` or `channel`+`tasks`")]
    AmbiguousSchema,
    #[error("malformed solution: {0}")]
    BadSolution(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct ItemJson {
    weight: f64,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceJson {
    capacity: f64,
    groups: Vec<Vec<ItemJson>>,
}

/// Renders an instance in the wire schema.
pub fn instance_to_json(instance: &Instance) -> String {
    let wire = InstanceJson {
        capacity: instance.capacity(),
        groups: instance
            .groups()
            .iter()
            .map(|g| {
                g.items()
                    .iter()
                    .map(|i| ItemJson {
                        weight: i.weight,
                        value: i.value,
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("instance serialization cannot fail")
}

/// Parses and validates an instance from wire JSON.
pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let wire: InstanceJson = serde_json::from_str(text)?;
    let groups = wire
        .groups
        .into_iter()
        .map(|g| g.into_iter().map(|i| Item::new(i.weight, i.value)).collect())
        .collect();
    Ok(Instance::new(groups, wire.capacity)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionJson {
    status: String,
    choices: Vec<usize>,
    total_value: f64,
    total_weight: f64,
}

/// Renders a solver outcome in the wire schema. Feasible solutions list the
/// chosen item index per group, in group order.
pub fn outcome_to_json(outcome: &SolveOutcome) -> String {
    let wire = match outcome {
        SolveOutcome::Feasible(solution) => SolutionJson {
            status: "feasible".into(),
            choices: solution.choices.iter().map(|c| c.item).collect(),
            total_value: solution.total_value,
            total_weight: solution.total_weight,
        },
        SolveOutcome::Infeasible => SolutionJson {
            status: "infeasible".into(),
            choices: vec![],
            total_value: 0.0,
            total_weight: 0.0,
        },
    };
    serde_json::to_string_pretty(&wire).expect("solution serialization cannot fail")
}

/// Parses a solver outcome from wire JSON.
pub fn outcome_from_json(text: &str) -> Result<SolveOutcome, IoError> {
    let wire: SolutionJson = serde_json::from_str(text)?;
    match wire.status.as_str() {
        "infeasible" => Ok(SolveOutcome::Infeasible),
        "feasible" => Ok(SolveOutcome::Feasible(Solution {
            choices: wire
                .choices
                .iter()
                .enumerate()
                .map(|(g, &n)| Choice::new(g, n))
                .collect(),
            total_value: wire.total_value,
            total_weight: wire.total_weight,
        })),
        other => Err(IoError::BadSolution(format!("unknown status {other:?}"))),
    }
}

/// A parsed input file for `solve`: either kind is accepted and detected
/// from its required fields.
#[derive(Debug)]
pub enum SolveInput {
    Instance(Instance),
    Scenario(Box<Scenario>),
}

/// Detects and parses a solve input. Instance files carry `groups` and
/// `capacity`; scenario files carry `channel` and `tasks`. Anything else,
/// or a file matching both, is rejected.
pub fn detect_input(text: &str) -> Result<SolveInput, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or(IoError::AmbiguousSchema)?;
    let looks_instance = object.contains_key("groups") && object.contains_key("capacity");
    let looks_scenario = object.contains_key("channel") && object.contains_key("tasks");
    match (looks_instance, looks_scenario) {
        (true, false) => Ok(SolveInput::Instance(instance_from_json(text)?)),
        (false, true) => {
            let scenario: Scenario = serde_json::from_str(text)?;
            scenario.validate()?;
            Ok(SolveInput::Scenario(Box::new(scenario)))
        }
        _ => Err(IoError::AmbiguousSchema),
    }
}

pub fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so a failed run never leaves a partial output file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let wrap = |source: std::io::Error| IoError::File {
        path: path.display().to_string(),
        source,
    };
    let directory = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| wrap(std::io::Error::other("path has no file name")))?;
    let mut tmp = std::ffi::OsString::from(".");
    tmp.push(file_name);
    tmp.push(format!(".tmp.{}", std::process::id()));
    let tmp_path = match directory {
        Some(dir) => dir.join(&tmp),
        None => Path::new(&tmp).to_path_buf(),
    };

    let result = (|| {
        let mut file = fs::File::create(&tmp_path)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp_path, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp_path);
    }
    result.map_err(wrap)
}
