use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{floor_pow, DerivedScales, ExpansionParams};
use crate::graph::{bfs_layers, Graph, Path, VertexSet};

/// A vertex with `ceil(log^2 m)` of its neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub center: usize,
    pub members: VertexSet,
}

/// Outcome of [`split_by_degree`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSplit {
    /// Enough disjoint stars were found.
    Stars(Vec<Star>),
    /// Every vertex outside `x` (the union of `stars`) has degree below
    /// `ceil(log^2 m)` in `H - x`.
    SparseResidue { x: VertexSet, stars: Vec<Star> },
}

impl DegreeSplit {
    pub fn stars(&self) -> &[Star] {
        match self {
            DegreeSplit::Stars(s) => s,
            DegreeSplit::SparseResidue { stars, .. } => stars,
        }
    }
}

/// `ceil((log m)^2)`, the star size and degree threshold.
pub fn high_degree_threshold(m: usize) -> usize {
    let l = (m.max(2) as f64).ln();
    (l * l).ceil() as usize
}

/// Greedily takes, in increasing id order, each vertex whose degree in what
/// is left is at least `ceil(log^2 m)`, together with its smallest
/// `ceil(log^2 m)` remaining neighbours, until `star_target` stars exist.
/// The target is `floor(m^(6 sigma))` unless overridden.
pub fn split_by_degree(h: &Graph, sigma: f64) -> DegreeSplit {
    split_by_degree_with(h, sigma, None)
}

pub fn split_by_degree_with(h: &Graph, sigma: f64, star_target: Option<usize>) -> DegreeSplit {
    let m = h.n();
    let threshold = high_degree_threshold(m);
    let target = star_target
        .unwrap_or_else(|| floor_pow(m, 6.0 * sigma))
        .max(1);
    let mut taken = vec![false; m];
    let mut stars = Vec::new();
    // Residual degrees only fall, so one pass in id order is exhaustive.
    for v in 0..m {
        if taken[v] {
            continue;
        }
        let free: Vec<usize> = h
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !taken[w])
            .collect();
        if free.len() < threshold {
            continue;
        }
        let mut members: Vec<usize> = free[..threshold].to_vec();
        members.push(v);
        for &w in &members {
            taken[w] = true;
        }
        stars.push(Star {
            center: v,
            members: members.into_iter().collect(),
        });
        if stars.len() >= target {
            return DegreeSplit::Stars(stars);
        }
    }
    DegreeSplit::SparseResidue {
        x: VertexSet::from_mask(&taken),
        stars,
    }
}

/// Ball around a corner candidate after some of its paths are consumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerBall {
    pub ball: VertexSet,
    pub radius: usize,
    /// Whether the ball reached `log^2 m` vertices.
    pub reached_target: bool,
}

/// Grows `B^j_{H-P-B+v}(v)` for `j <= l`, where `P` is the union of the
/// consumed paths. The consumed paths must start at `v` and be consecutive
/// shortest paths from `v` inside `B^l(v)`.
pub fn grow_corner_ball(
    h: &Graph,
    v: usize,
    consumed_paths: &[Path],
    b: &VertexSet,
    d: &DerivedScales,
    p: &ExpansionParams,
) -> Result<CornerBall> {
    let m = h.n();
    if v >= m {
        return Err(Error::VertexOutOfRange { vertex: v, n: m });
    }
    b.check_range(m)?;
    if b.contains(v) {
        return Err(Error::Overlap(v));
    }
    if consumed_paths.len() > 2 * p.t {
        return Err(Error::InvalidParameter(format!(
            "{} consumed paths, at most 2t = {} allowed",
            consumed_paths.len(),
            2 * p.t
        )));
    }
    if b.len() > p.t {
        return Err(Error::InvalidParameter(format!(
            "|B| = {} exceeds t = {}",
            b.len(),
            p.t
        )));
    }
    let around = bfs_layers(h, &[v], |_| true, d.l, usize::MAX);
    let mut open: Vec<bool> = (0..m).map(|w| around.dist[w] != usize::MAX).collect();
    for (i, path) in consumed_paths.iter().enumerate() {
        if path.first() != v {
            return Err(Error::Precondition(format!(
                "consumed path {i} does not start at {v}"
            )));
        }
        if let Some(&w) = path.vertices().iter().find(|&&w| w >= m || !open[w]) {
            return Err(Error::Precondition(format!(
                "consumed path {i} leaves the ball or reuses vertex {w}"
            )));
        }
        let dist = bfs_layers(h, &[v], |w| open[w], usize::MAX, usize::MAX).dist[path.last()];
        if dist != path.len() {
            return Err(Error::Precondition(format!(
                "consumed path {i} has length {} but the residual distance is {dist}",
                path.len()
            )));
        }
        for &w in &path.vertices()[1..] {
            open[w] = false;
        }
    }
    let mut blocked = vec![false; m];
    for path in consumed_paths {
        for &w in &path.vertices()[1..] {
            blocked[w] = true;
        }
    }
    for w in b.iter() {
        blocked[w] = true;
    }
    let grown = bfs_layers(h, &[v], |w| !blocked[w], d.l, usize::MAX);
    let target = (m as f64).ln().powi(2);
    let ball: VertexSet = grown.order.iter().copied().collect();
    Ok(CornerBall {
        reached_target: ball.len() as f64 >= target,
        radius: grown.radius,
        ball,
    })
}
