//! JSON view of a partition run.

use serde::{Deserialize, Serialize};

use crate::archipelago::{Archipelago, EdgePartition};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IslandReport {
    pub id: usize,
    pub entry: Vec<String>,
    pub vertices: Vec<String>,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgesReport {
    pub archipelago: Vec<usize>,
    pub cut: Vec<usize>,
    pub exterior: Vec<usize>,
}

/// Serialized as
/// `{"k", "source", "lcc", "islands": [{"id","entry","vertices","parent"}],
/// "edges": {"archipelago","cut","exterior"}}`. Vertex lists follow vertex
/// id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub k: usize,
    pub source: String,
    pub lcc: Vec<String>,
    pub islands: Vec<IslandReport>,
    pub edges: EdgesReport,
}

impl PartitionReport {
    pub fn new(h: &Hypergraph, a: &Archipelago, p: &EdgePartition) -> Self {
        let names = |s: &crate::VertexSet| s.iter().map(|v| h.token(v).to_string()).collect();
        PartitionReport {
            k: h.rank(),
            source: h.token(a.source()).to_string(),
            lcc: names(&a.vertex_set()),
            islands: a
                .islands()
                .map(|i| IslandReport {
                    id: i.id.0,
                    entry: names(&i.entry),
                    vertices: names(&i.vertex_set()),
                    parent: a.parent(i.id).map(|p| p.0),
                })
                .collect(),
            edges: EdgesReport {
                archipelago: p.archipelago.clone(),
                cut: p.cut.clone(),
                exterior: p.exterior.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
