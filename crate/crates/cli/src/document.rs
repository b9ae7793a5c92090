//! JSON documents read and written by the command-line tool.

use std::collections::BTreeMap;

use netident::graph::PathSet;
use netident::identify::{Certificate, NodeOutcome};
use netident::{Graph, VertexSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Graph input file: vertex count, 1-based edges and optional labels keyed by
/// 1-based vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("graph document: {e}")))?;
        doc.graph()?;
        doc.labels()?;
        Ok(doc)
    }

    pub fn graph(&self) -> Result<Graph, CliError> {
        Ok(Graph::from_one_based(self.n, &self.edges)?)
    }

    /// Labels indexed by 0-based vertex.
    pub fn labels(&self) -> Result<BTreeMap<usize, String>, CliError> {
        let mut out = BTreeMap::new();
        for (key, label) in self.labels.iter().flatten() {
            let v: usize = key
                .parse()
                .ok()
                .filter(|v| (1..=self.n).contains(v))
                .ok_or_else(|| CliError::Input(format!("label key {key:?} is not a vertex id in 1..={}", self.n)))?;
            out.insert(v - 1, label.clone());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictInputs {
    pub graph: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    pub measured: VertexSet,
    pub counterexample: bool,
}

/// Result of `check-node` and `check-graph`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDocument {
    pub command: String,
    pub inputs: VerdictInputs,
    pub verdict: bool,
    pub certificate: Certificate,
    /// Per-node outcomes of `check-graph`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<NodeOutcome>,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsInputs {
    pub graph: String,
    pub from: VertexSet,
    pub to: VertexSet,
    pub constrained: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u128>,
}

/// Result of `paths`: a maximum family, or the outcome of the constrained
/// search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsDocument {
    pub command: String,
    pub inputs: PathsInputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs_examined: Option<usize>,
    pub witness: Option<PathSet>,
    pub version: String,
}

/// Single-line error report written to stderr.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorDocument {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

