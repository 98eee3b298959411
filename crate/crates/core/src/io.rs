//! JSON forms of graphs and detector sets.
//!
//! Graphs are `{"n": 4, "edges": [[0,1],[1,2]]}` or `{"king_torus": [6, 6]}`.
//! Detector sets are `{"kind": "open", "detectors": [0, 3]}`, optionally with
//! the graph inlined under `"graph"`.

use serde::{Deserialize, Serialize};

use crate::detection::DetectorSet;
use crate::error::{Error, Result};
use crate::graph::{DetectionKind, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GraphSpec {
    KingTorus { king_torus: [usize; 2] },
    Edges { n: usize, edges: Vec<[usize; 2]> },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::KingTorus { king_torus: [r, c] } => Graph::king_torus(*r, *c),
            GraphSpec::Edges { n, edges } => {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|[u, v]| (*u, *v)).collect();
                Graph::from_edges(*n, &pairs)
            }
        }
    }

    pub fn of(graph: &Graph) -> Self {
        match graph.torus_shape() {
            Some(shape) => GraphSpec::KingTorus { king_torus: [shape.rows, shape.cols] },
            None => GraphSpec::Edges { n: graph.vertex_count(), edges: graph.edges().map(|(u, v)| [u, v]).collect() },
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let spec: GraphSpec = serde_json::from_str(text).map_err(|e| Error::format(format!("graph JSON: {e}")))?;
    spec.build()
}

pub fn graph_to_json(graph: &Graph) -> String {
    serde_json::to_string(&GraphSpec::of(graph)).expect("graph specs serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSetSpec {
    pub kind: DetectionKind,
    pub detectors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
}

impl DetectorSetSpec {
    pub fn of(set: &DetectorSet<'_>) -> Self {
        DetectorSetSpec { kind: set.kind(), detectors: set.members().to_vec(), graph: None }
    }

    pub fn attach<'g>(&self, graph: &'g Graph) -> Result<DetectorSet<'g>> {
        DetectorSet::new(graph, self.kind, self.detectors.iter().copied())
    }
}

pub fn parse_detector_set(text: &str) -> Result<DetectorSetSpec> {
    serde_json::from_str(text).map_err(|e| Error::format(format!("detector set JSON: {e}")))
}
