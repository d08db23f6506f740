//! Small `K_t` minors inside expanders: nice-set harvesting, staged path
//! collection with conflict pruning, and branch-set assembly.

mod build;
mod pipeline;
mod prune;

pub use build::*;
pub use pipeline::*;
pub use prune::*;

use serde::{Deserialize, Serialize};

use crate::graph::{VertexMap, VertexSet};

/// A set of small radius around a center: every member is within
/// `radius_bound` of `center` inside the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceSet {
    pub vertices: VertexSet,
    pub center: usize,
    pub radius_bound: usize,
}

/// Record of one stage of the minor construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub alpha: usize,
    pub index_set_size: usize,
    /// `floor(m^(1/4 - 2 alpha eta))`, the size the stage is meant to start with.
    pub index_set_target: usize,
    pub forbidden_size: usize,
    pub hub_vertex: usize,
    pub hub_coverage: usize,
    pub chosen_index: usize,
    pub routed: usize,
    pub survivors: usize,
    pub max_path_len: usize,
}

/// `t` disjoint connected branch sets with an edge between every pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub t: usize,
    pub branch_sets: Vec<VertexSet>,
    pub total_vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_trace: Option<Vec<StageRecord>>,
}

impl MinorModel {
    pub fn new(t: usize, branch_sets: Vec<VertexSet>) -> Self {
        let total_vertices = branch_sets.iter().map(VertexSet::len).sum();
        MinorModel {
            t,
            branch_sets,
            total_vertices,
            stage_trace: None,
        }
    }

    /// Relabels the branch sets through `map` (subgraph ids to host ids).
    pub fn map_to_host(&self, map: &VertexMap) -> MinorModel {
        MinorModel {
            t: self.t,
            branch_sets: self
                .branch_sets
                .iter()
                .map(|s| map.set_to_host(s))
                .collect(),
            total_vertices: self.total_vertices,
            stage_trace: self.stage_trace.clone(),
        }
    }
}
