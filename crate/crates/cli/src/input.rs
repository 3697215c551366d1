//! Reading JSON inputs and mapping failures to exit codes.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use vmetric::connect::Partition;
use vmetric::ultra::{TreeNode, ValuedTree};
use vmetric::{FiniteMetricSpace, Rational, ValueSet};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    Usage(String),
    /// The operation rejected well-formed input; exit code 1.
    Domain { kind: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Usage(message) => json!({"error": "usage", "message": message}),
            CliError::Domain { kind, message } => json!({"error": kind, "message": message}),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain { message, .. } => write!(f, "{message}"),
        }
    }
}

/// `NoAmalgam { .. }` becomes `no_amalgam`; transparent wrappers are skipped.
fn kind_of(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let name: String = rest.chars().take_while(|c| c.is_alphanumeric()).collect();
        let after = &rest[name.len()..];
        if matches!(name.as_str(), "Space" | "Ultra" | "Values") && after.starts_with('(') {
            rest = &after[1..];
            continue;
        }
        let mut out = String::new();
        for (i, c) in name.chars().enumerate() {
            if c.is_uppercase() {
                if i > 0 {
                    out.push('_');
                }
                out.extend(c.to_lowercase());
            } else {
                out.push(c);
            }
        }
        return out;
    }
}

pub fn domain<E: fmt::Debug + fmt::Display>(e: E) -> CliError {
    CliError::Domain {
        kind: kind_of(&format!("{e:?}")),
        message: e.to_string(),
    }
}

pub fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
struct RawValues {
    values: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    #[serde(default)]
    value_set: Option<RawValues>,
}

#[derive(Deserialize)]
struct RawTree {
    nodes: Vec<TreeNode>,
}

fn values_from(raw: RawValues) -> Result<ValueSet, CliError> {
    ValueSet::new(raw.values).map_err(domain)
}

pub fn values(path: &Path) -> Result<ValueSet, CliError> {
    values_from(read_json(path)?)
}

fn space_from(raw: RawSpace) -> Result<FiniteMetricSpace, CliError> {
    let v = raw.value_set.map(values_from).transpose()?;
    FiniteMetricSpace::build(raw.labels, raw.dist, v).map_err(domain)
}

pub fn space(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    space_from(read_json(path)?)
}

pub fn tree(path: &Path) -> Result<ValuedTree, CliError> {
    let raw: RawTree = read_json(path)?;
    ValuedTree::new(raw.nodes).map_err(domain)
}

/// A tree file, or a space file read through its nerve.
pub fn tree_or_space(path: &Path) -> Result<ValuedTree, CliError> {
    let value: serde_json::Value = read_json(path)?;
    if value.get("nodes").is_some() {
        let raw: RawTree = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
        ValuedTree::new(raw.nodes).map_err(domain)
    } else {
        let raw: RawSpace = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
        vmetric::ultra::nerve(&space_from(raw)?).map_err(domain)
    }
}

pub fn json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    read_json(path)
}

pub fn partition(path: &Path) -> Result<Partition, CliError> {
    read_json(path)
}

pub fn point(space: &FiniteMetricSpace, label: &str) -> Result<usize, CliError> {
    space.point(label).map_err(domain)
}
