use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{average_degree, girth, Graph};
use crate::io::read_graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `G(n, p)` with `p = param / (n - 1)`.
    GnpAvgDegree,
    /// Uniform-ish `param`-regular graph from the pairing model.
    RandomRegular,
    /// `blob_count` disjoint copies of `G(n / blob_count, param)`.
    DenseBlobs,
    /// `sqrt(n) x sqrt(n)` torus.
    GridTorus,
    /// Read from `path`.
    File,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::GnpAvgDegree => "gnp_avg_degree",
            Family::RandomRegular => "random_regular",
            Family::DenseBlobs => "dense_blobs",
            Family::GridTorus => "grid_torus",
            Family::File => "file",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "gnp_avg_degree" | "gnp" => Ok(Family::GnpAvgDegree),
            "random_regular" | "regular" => Ok(Family::RandomRegular),
            "dense_blobs" | "blobs" => Ok(Family::DenseBlobs),
            "grid_torus" | "torus" => Ok(Family::GridTorus),
            "file" => Ok(Family::File),
            _ => Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }
}

/// A reproducible graph description. Randomness comes from ChaCha8 seeded
/// with `seed`, so the same spec gives the same graph on every platform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub param: f64,
    #[serde(default = "one")]
    pub blob_count: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

fn one() -> usize {
    1
}

impl GeneratorSpec {
    pub fn gnp(n: usize, avg_degree: f64, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::GnpAvgDegree,
            n,
            param: avg_degree,
            blob_count: 1,
            seed,
            path: None,
        }
    }

    pub fn regular(n: usize, d: usize, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::RandomRegular,
            param: d as f64,
            ..Self::gnp(n, 0.0, seed)
        }
    }

    pub fn blobs(n: usize, blob_count: usize, p: f64, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::DenseBlobs,
            blob_count,
            param: p,
            ..Self::gnp(n, 0.0, seed)
        }
    }

    pub fn torus(side: usize) -> Self {
        GeneratorSpec {
            family: Family::GridTorus,
            ..Self::gnp(side * side, 0.0, 0)
        }
    }
}

/// Facts about a generated graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub n: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub girth: Option<usize>,
}

impl GraphMetadata {
    pub fn of(g: &Graph) -> Self {
        let average_degree = average_degree(g)
            .map(|d| *d.numer() as f64 / *d.denom() as f64)
            .unwrap_or(0.0);
        GraphMetadata {
            n: g.n(),
            edges: g.edge_count(),
            average_degree,
            min_degree: g.min_degree(),
            max_degree: g.max_degree(),
            girth: girth(g),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::GnpAvgDegree => {
            if spec.n < 2
                || spec.param.is_nan()
                || spec.param < 0.0
                || spec.param > (spec.n - 1) as f64
            {
                return Err(Error::InvalidParameter(format!(
                    "average degree {} impossible on {} vertices",
                    spec.param, spec.n
                )));
            }
            Graph::from_edges(
                spec.n,
                gnp_edges(spec.n, spec.param / (spec.n - 1) as f64, 0, &mut rng),
            )
        }
        Family::RandomRegular => random_regular(spec.n, spec.param, &mut rng),
        Family::DenseBlobs => {
            let b = spec.blob_count;
            if b == 0 || spec.n < b || !(0.0..=1.0).contains(&spec.param) {
                return Err(Error::InvalidParameter(format!(
                    "{b} blobs with edge probability {} on {} vertices",
                    spec.param, spec.n
                )));
            }
            let mut edges = Vec::new();
            let mut start = 0;
            for i in 0..b {
                let size = spec.n / b + usize::from(i < spec.n % b);
                edges.extend(gnp_edges(size, spec.param, start, &mut rng));
                start += size;
            }
            Graph::from_edges(spec.n, edges)
        }
        Family::GridTorus => {
            let side = (spec.n as f64).sqrt().round() as usize;
            if side * side != spec.n || side < 3 {
                return Err(Error::InvalidParameter(format!(
                    "torus needs a square n >= 9, got {}",
                    spec.n
                )));
            }
            Ok(crate::graph::families::grid_torus(side))
        }
        Family::File => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("file family needs a path".into()))?;
            read_graph(path)
        }
    }
}

/// Edges of `G(size, p)` on `offset..offset+size`, by geometric skipping
/// over the pairs in lexicographic order.
fn gnp_edges(size: usize, p: f64, offset: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if size < 2 || p <= 0.0 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..size {
            for u in 0..v {
                edges.push((offset + u, offset + v));
            }
        }
        return edges;
    }
    let lq = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < size {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / lq).floor() as i64;
        while w >= v as i64 && v < size {
            w -= v as i64;
            v += 1;
        }
        if v < size {
            edges.push((offset + w as usize, offset + v));
        }
    }
    edges
}

/// Pairing model: match the `n d` half-edges at random, refusing loops and
/// repeated edges; restart when stuck.
fn random_regular(n: usize, d: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if d < 0.0 || d.fract() != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "degree {d} is not a nonnegative integer"
        )));
    }
    let d = d as usize;
    if d >= n.max(1) || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "no {d}-regular graph on {n} vertices"
        )));
    }
    for _ in 0..100 {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        points.shuffle(rng);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut stuck = false;
        while !points.is_empty() {
            let len = points.len();
            let mut placed = false;
            for _ in 0..50 {
                let i = rng.gen_range(0..len);
                let j = rng.gen_range(0..len);
                let (u, v) = (points[i], points[j]);
                if i == j || u == v || adjacency[u].contains(&v) {
                    continue;
                }
                adjacency[u].push(v);
                adjacency[v].push(u);
                edges.push((u, v));
                let (hi, lo) = (i.max(j), i.min(j));
                points.swap_remove(hi);
                points.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                stuck = true;
                break;
            }
        }
        if !stuck {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::InvalidParameter(format!(
        "pairing kept failing for a {d}-regular graph on {n} vertices"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_4x4() {
        let g = generate(&GeneratorSpec::torus(4)).unwrap();
        assert_eq!(g.edge_count(), 32);
        assert_eq!((g.min_degree(), g.max_degree()), (4, 4));
    }

    #[test]
    fn regular_is_reproducible() {
        let spec = GeneratorSpec::regular(100, 3, 7);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert_eq!((a.min_degree(), a.max_degree()), (3, 3));
        assert!(generate(&GeneratorSpec::regular(7, 3, 1)).is_err());
        let dense = generate(&GeneratorSpec::regular(200, 20, 3)).unwrap();
        assert_eq!((dense.min_degree(), dense.max_degree()), (20, 20));
    }

    #[test]
    fn gnp_hits_the_average_degree() {
        let g = generate(&GeneratorSpec::gnp(4000, 20.0, 1)).unwrap();
        let meta = GraphMetadata::of(&g);
        assert!((meta.average_degree - 20.0).abs() < 0.5, "{meta:?}");
        let other = generate(&GeneratorSpec::gnp(4000, 20.0, 2)).unwrap();
        assert_ne!(
            g.edges().collect::<Vec<_>>(),
            other.edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn blobs_of_density_point_eight() {
        let g = generate(&GeneratorSpec::blobs(200, 5, 0.8, 3)).unwrap();
        let meta = GraphMetadata::of(&g);
        // Expected 0.8 * 39 = 31.2.
        assert!((meta.average_degree - 31.2).abs() < 1.5, "{meta:?}");
        assert!(g.edges().all(|(u, v)| u / 40 == v / 40));
    }
}
