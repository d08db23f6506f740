//! `K_t` subdivisions from expanders: degree split, unit construction and
//! unit connection.

mod connect;
mod pipeline;
mod split;
mod units;

pub use connect::*;
pub use pipeline::*;
pub use split::*;
pub use units::*;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Path, VertexMap};
use crate::minor::NiceSet;

/// A corner vertex with `t` spokes, spoke `i` running from the corner to the
/// center of nice set `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub corner: usize,
    pub spokes: Vec<Path>,
    pub sets: Vec<NiceSet>,
    pub sigma: f64,
}

impl Unit {
    pub fn t(&self) -> usize {
        self.spokes.len()
    }

    pub fn centers(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.center).collect()
    }

    pub fn map_to_host(&self, map: &VertexMap) -> Unit {
        Unit {
            corner: map.to_host(self.corner),
            spokes: self.spokes.iter().map(|p| map.path_to_host(p)).collect(),
            sets: self
                .sets
                .iter()
                .map(|s| NiceSet {
                    vertices: map.set_to_host(&s.vertices),
                    center: map.to_host(s.center),
                    radius_bound: s.radius_bound,
                })
                .collect(),
            sigma: self.sigma,
        }
    }

    /// Every vertex on a spoke or in a set.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .spokes
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .chain(self.sets.iter().flat_map(|s| s.vertices.iter()))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `t` corners joined pairwise by internally disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SubdivisionJson", into = "SubdivisionJson")]
pub struct SubdivisionModel {
    pub t: usize,
    pub corners: Vec<usize>,
    /// `(i, j)` with `i < j` (corner indices) to a path from `corners[i]` to `corners[j]`.
    pub edge_paths: BTreeMap<(usize, usize), Path>,
    pub total_vertices: usize,
}

impl SubdivisionModel {
    pub fn new(corners: Vec<usize>, edge_paths: BTreeMap<(usize, usize), Path>) -> Self {
        let mut all: Vec<usize> = corners.clone();
        for p in edge_paths.values() {
            all.extend_from_slice(p.vertices());
        }
        all.sort_unstable();
        all.dedup();
        SubdivisionModel {
            t: corners.len(),
            corners,
            edge_paths,
            total_vertices: all.len(),
        }
    }

    pub fn map_to_host(&self, map: &VertexMap) -> SubdivisionModel {
        SubdivisionModel {
            t: self.t,
            corners: self.corners.iter().map(|&v| map.to_host(v)).collect(),
            edge_paths: self
                .edge_paths
                .iter()
                .map(|(&k, p)| (k, map.path_to_host(p)))
                .collect(),
            total_vertices: self.total_vertices,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SubdivisionJson {
    t: usize,
    corners: Vec<usize>,
    paths: BTreeMap<String, Vec<usize>>,
    total_vertices: usize,
}

impl From<SubdivisionModel> for SubdivisionJson {
    fn from(m: SubdivisionModel) -> Self {
        SubdivisionJson {
            t: m.t,
            corners: m.corners,
            paths: m
                .edge_paths
                .into_iter()
                .map(|((i, j), p)| (format!("{i}-{j}"), p.vertices().to_vec()))
                .collect(),
            total_vertices: m.total_vertices,
        }
    }
}

impl TryFrom<SubdivisionJson> for SubdivisionModel {
    type Error = Error;

    fn try_from(j: SubdivisionJson) -> Result<Self, Error> {
        let mut edge_paths = BTreeMap::new();
        for (key, vertices) in j.paths {
            let bad =
                || Error::InvalidParameter(format!("path key {key:?} is not of the form i-j"));
            let (a, b) = key.split_once('-').ok_or_else(bad)?;
            let i: usize = a.trim().parse().map_err(|_| bad())?;
            let k: usize = b.trim().parse().map_err(|_| bad())?;
            edge_paths.insert((i, k), Path::new(vertices)?);
        }
        Ok(SubdivisionModel {
            t: j.t,
            corners: j.corners,
            edge_paths,
            total_vertices: j.total_vertices,
        })
    }
}
