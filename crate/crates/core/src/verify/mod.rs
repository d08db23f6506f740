//! Independent certification of emitted witnesses and exhaustive oracles
//! for tiny instances. Nothing here trusts the constructions.

mod brute;

pub use brute::*;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::expansion::{floor_pow, DerivedScales};
use crate::graph::{Graph, Path};
use crate::minor::MinorModel;
use crate::subdivision::{SubdivisionModel, Unit};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub measured_size: usize,
}

#[derive(Default)]
struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, rule: &str, witness: impl Into<String>) {
        self.0.push(Violation {
            rule: rule.to_string(),
            witness: witness.into(),
        });
    }

    fn finish(self, measured_size: usize) -> VerificationReport {
        VerificationReport {
            valid: self.0.is_empty(),
            violations: self.0,
            measured_size,
        }
    }
}

fn connected(g: &Graph, members: &[usize]) -> bool {
    let Some(&start) = members.first() else {
        return false;
    };
    let inside: HashSet<usize> = members.iter().copied().collect();
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if inside.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == inside.len()
}

/// Checks that the branch sets are nonempty, pairwise disjoint, connected and
/// pairwise joined by an edge.
pub fn verify_minor_model(g: &Graph, model: &MinorModel) -> VerificationReport {
    let mut out = Collector::default();
    if model.branch_sets.len() != model.t {
        out.push(
            "count",
            format!(
                "{} branch sets for t = {}",
                model.branch_sets.len(),
                model.t
            ),
        );
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (r, set) in model.branch_sets.iter().enumerate() {
        if set.is_empty() {
            out.push("nonempty", format!("branch set {r} is empty"));
        }
        for v in set.iter() {
            if v >= g.n() {
                out.push(
                    "range",
                    format!("vertex {v} in branch set {r} is not in the graph"),
                );
            } else if let Some(prev) = owner.insert(v, r) {
                out.push(
                    "disjoint",
                    format!("vertex {v} lies in branch sets {prev} and {r}"),
                );
            }
        }
    }
    if !out.0.is_empty() {
        let size = model.branch_sets.iter().map(|s| s.len()).sum();
        return out.finish(size);
    }
    for (r, set) in model.branch_sets.iter().enumerate() {
        if !connected(g, set.as_slice()) {
            out.push("connected", format!("branch set {r} is not connected"));
        }
    }
    let k = model.branch_sets.len();
    let mut adjacent = vec![vec![false; k]; k];
    for (&v, &r) in &owner {
        for &w in g.neighbors(v) {
            if let Some(&s) = owner.get(&w) {
                adjacent[r][s] = true;
            }
        }
    }
    for (r, row) in adjacent.iter().enumerate() {
        for (s, &joined) in row.iter().enumerate().skip(r + 1) {
            if !joined {
                out.push(
                    "adjacent",
                    format!("no edge between branch sets {r} and {s}"),
                );
            }
        }
    }
    let measured: usize = owner.len();
    if measured != model.total_vertices {
        out.push(
            "size",
            format!(
                "total_vertices = {} but branch sets hold {measured}",
                model.total_vertices
            ),
        );
    }
    out.finish(measured)
}

fn check_path(g: &Graph, path: &Path, name: &str, out: &mut Collector) -> bool {
    let vs = path.vertices();
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        out.push("range", format!("{name} uses vertex {v} outside the graph"));
        return false;
    }
    let mut seen = HashSet::new();
    for &v in vs {
        if !seen.insert(v) {
            out.push("simple", format!("{name} repeats vertex {v}"));
            return false;
        }
    }
    for w in vs.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            out.push(
                "edge",
                format!("{name} steps along non-edge {}-{}", w[0], w[1]),
            );
            return false;
        }
    }
    true
}

/// Checks corners, endpoints, that every path is a path of `g`, and that no
/// two paths share a vertex other than common corners.
pub fn verify_subdivision(g: &Graph, model: &SubdivisionModel) -> VerificationReport {
    let mut out = Collector::default();
    let t = model.t;
    if model.corners.len() != t {
        out.push(
            "count",
            format!("{} corners for t = {t}", model.corners.len()),
        );
    }
    let corner_index: HashMap<usize, usize> = model
        .corners
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    if corner_index.len() != model.corners.len() {
        out.push("corners", "corners are not distinct");
    }
    for &c in &model.corners {
        if c >= g.n() {
            out.push("range", format!("corner {c} is not in the graph"));
        }
    }
    let tc = model.corners.len();
    for i in 0..tc {
        for j in i + 1..tc {
            if !model.edge_paths.contains_key(&(i, j)) {
                out.push("missing", format!("no path for corners {i}-{j}"));
            }
        }
    }
    let mut interior_owner: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut all: HashSet<usize> = model.corners.iter().copied().collect();
    for (&(i, j), path) in &model.edge_paths {
        let name = format!("path {i}-{j}");
        if i >= j || j >= tc {
            out.push(
                "key",
                format!("{name} does not name two corners in increasing order"),
            );
            continue;
        }
        if !check_path(g, path, &name, &mut out) {
            continue;
        }
        if path.first() != model.corners[i] || path.last() != model.corners[j] {
            out.push(
                "endpoints",
                format!(
                    "{name} runs {}..{} instead of {}..{}",
                    path.first(),
                    path.last(),
                    model.corners[i],
                    model.corners[j]
                ),
            );
        }
        let vs = path.vertices();
        for &v in &vs[1..vs.len().saturating_sub(1)] {
            all.insert(v);
            if corner_index.contains_key(&v) {
                out.push("corner_pass", format!("{name} passes through corner {v}"));
            } else if let Some(prev) = interior_owner.insert(v, (i, j)) {
                out.push(
                    "disjoint",
                    format!("paths {}-{} and {name} share vertex {v}", prev.0, prev.1),
                );
            }
        }
    }
    if all.len() != model.total_vertices {
        out.push(
            "size",
            format!(
                "total_vertices = {} but the model uses {}",
                model.total_vertices,
                all.len()
            ),
        );
    }
    out.finish(all.len())
}

/// Checks the unit invariants: set sizes `floor(m^sigma)`, set radii at most
/// `k` around their centers, spokes from the corner to the centers of length
/// at most `6k`, spokes meeting only at the corner, spokes avoiding the other
/// sets, and pairwise disjoint sets.
pub fn verify_unit(g: &Graph, u: &Unit, d: &DerivedScales) -> VerificationReport {
    let mut out = Collector::default();
    let t = u.spokes.len();
    if u.sets.len() != t {
        out.push("count", format!("{t} spokes but {} sets", u.sets.len()));
        return out.finish(u.vertices().len());
    }
    let size = floor_pow(d.m, u.sigma).max(1);
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (i, s) in u.sets.iter().enumerate() {
        if s.vertices.len() != size {
            out.push(
                "set_size",
                format!("set {i} has {} vertices, expected {size}", s.vertices.len()),
            );
        }
        for v in s.vertices.iter() {
            if v >= g.n() {
                out.push("range", format!("set {i} contains {v} outside the graph"));
            } else if let Some(prev) = owner.insert(v, i) {
                out.push(
                    "sets_disjoint",
                    format!("sets {prev} and {i} share vertex {v}"),
                );
            }
        }
        if !s.vertices.contains(s.center) {
            out.push(
                "radius",
                format!("center {} of set {i} is outside the set", s.center),
            );
            continue;
        }
        let inside: HashSet<usize> = s.vertices.iter().collect();
        let mut dist = HashMap::from([(s.center, 0usize)]);
        let mut queue = std::collections::VecDeque::from([s.center]);
        while let Some(x) = queue.pop_front() {
            for &w in g.neighbors(x) {
                if inside.contains(&w) && !dist.contains_key(&w) {
                    dist.insert(w, dist[&x] + 1);
                    queue.push_back(w);
                }
            }
        }
        let radius = if dist.len() == inside.len() {
            dist.values().copied().max().unwrap_or(0)
        } else {
            usize::MAX
        };
        if radius > d.k {
            out.push(
                "radius",
                format!(
                    "set {i} has radius {radius} around its center, above k = {}",
                    d.k
                ),
            );
        }
    }
    let mut spoke_owner: HashMap<usize, usize> = HashMap::new();
    for (i, p) in u.spokes.iter().enumerate() {
        let name = format!("spoke {i}");
        if !check_path(g, p, &name, &mut out) {
            continue;
        }
        if p.first() != u.corner || p.last() != u.sets[i].center {
            out.push(
                "spoke_ends",
                format!(
                    "{name} does not run from the corner to center {}",
                    u.sets[i].center
                ),
            );
        }
        if p.len() > 6 * d.k {
            out.push(
                "spoke_length",
                format!("{name} has length {} above 6k = {}", p.len(), 6 * d.k),
            );
        }
        for &v in p.vertices() {
            if v != u.corner {
                if let Some(prev) = spoke_owner.insert(v, i) {
                    out.push(
                        "spokes_disjoint",
                        format!("spokes {prev} and {i} share vertex {v}"),
                    );
                }
            }
            if let Some(&j) = owner.get(&v) {
                if j != i {
                    out.push("spoke_avoids_sets", format!("{name} meets set {j} at {v}"));
                }
            }
        }
    }
    out.finish(u.vertices().len())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::expansion::ExpansionParams;
    use crate::graph::{families, VertexSet};
    use crate::minor::NiceSet;

    fn sets(v: Vec<Vec<usize>>) -> Vec<VertexSet> {
        v.into_iter().map(VertexSet::from).collect()
    }

    #[test]
    fn cycle_triangle_model() {
        let g = families::cycle(9);
        let good = MinorModel::new(3, sets(vec![vec![1], vec![2], vec![0, 3, 4, 5, 6, 7, 8]]));
        let r = verify_minor_model(&g, &good);
        assert!(r.valid, "{r:?}");
        assert_eq!(r.measured_size, 9);
        let split = MinorModel::new(3, sets(vec![vec![1], vec![2], vec![0, 3, 4, 6, 7, 8]]));
        let r = verify_minor_model(&g, &split);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| v.rule == "connected"));
    }

    #[test]
    fn petersen_contracted_matching_is_k5() {
        // Contract the five spokes i -- i+5.
        let g = families::petersen();
        let model = MinorModel::new(5, (0..5).map(|i| VertexSet::from(vec![i, i + 5])).collect());
        assert!(verify_minor_model(&g, &model).valid);
    }

    #[test]
    fn overlapping_branch_sets_are_rejected() {
        let g = families::complete(4);
        let model = MinorModel::new(2, sets(vec![vec![0, 1], vec![1, 2]]));
        let r = verify_minor_model(&g, &model);
        assert_eq!(r.violations[0].rule, "disjoint");
    }

    fn k4_model(g_paths: &[(usize, usize, Vec<usize>)], corners: Vec<usize>) -> SubdivisionModel {
        let mut paths = BTreeMap::new();
        for (i, j, p) in g_paths {
            paths.insert((*i, *j), Path::new(p.clone()).unwrap());
        }
        SubdivisionModel::new(corners, paths)
    }

    #[test]
    fn k4_is_its_own_subdivision() {
        let g = families::complete(4);
        let mut paths = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                paths.push((i, j, vec![i, j]));
            }
        }
        let r = verify_subdivision(&g, &k4_model(&paths, vec![0, 1, 2, 3]));
        assert!(r.valid, "{r:?}");
        assert_eq!(r.measured_size, 4);
    }

    #[test]
    fn shared_interior_is_rejected() {
        let g = families::complete(5);
        let paths = vec![
            (0, 1, vec![0, 4, 1]),
            (0, 2, vec![0, 4, 2]),
            (1, 2, vec![1, 2]),
        ];
        let r = verify_subdivision(&g, &k4_model(&paths, vec![0, 1, 2]));
        assert!(r.violations.iter().any(|v| v.rule == "disjoint"));
    }

    #[test]
    fn planted_subdivision_in_larger_graph() {
        // Corners 0..4, each pair joined through private path vertices,
        // embedded in a 30-vertex graph with extra noise edges.
        let mut edges = Vec::new();
        let mut paths = Vec::new();
        let mut next = 4;
        for i in 0..4 {
            for j in i + 1..4 {
                let (a, b) = (next, next + 1);
                next += 2;
                edges.extend([(i, a), (a, b), (b, j)]);
                paths.push((i, j, vec![i, a, b, j]));
            }
        }
        for v in next..30 {
            edges.push((v, v - 1));
        }
        let g = Graph::from_edges(30, edges).unwrap();
        let r = verify_subdivision(&g, &k4_model(&paths, vec![0, 1, 2, 3]));
        assert!(r.valid, "{r:?}");
        assert_eq!(r.measured_size, 16);
    }

    fn unit_scales() -> DerivedScales {
        let p = ExpansionParams::new(0.1, 0.1, 16, 2).unwrap();
        DerivedScales::new(16, &p).unwrap()
    }

    fn singleton(v: usize, k: usize) -> NiceSet {
        NiceSet {
            vertices: VertexSet::singleton(v),
            center: v,
            radius_bound: k,
        }
    }

    #[test]
    fn star_is_a_degenerate_unit() {
        let g = families::star(4);
        let d = unit_scales();
        let u = Unit {
            corner: 0,
            spokes: vec![
                Path::new(vec![0, 1]).unwrap(),
                Path::new(vec![0, 2]).unwrap(),
            ],
            sets: vec![singleton(1, d.k), singleton(2, d.k)],
            sigma: 0.01,
        };
        let r = verify_unit(&g, &u, &d);
        assert!(r.valid, "{r:?}");
    }

    #[test]
    fn spoke_clipping_another_set_is_rejected() {
        let g = families::path(5);
        let d = unit_scales();
        let u = Unit {
            corner: 2,
            spokes: vec![
                Path::new(vec![2, 1]).unwrap(),
                Path::new(vec![2, 3, 4]).unwrap(),
            ],
            sets: vec![singleton(1, d.k), singleton(4, d.k)],
            sigma: 0.01,
        };
        assert!(verify_unit(&g, &u, &d).valid);
        // Spoke 1 now reaches its set through set 0.
        let clipped = Unit {
            spokes: vec![
                Path::new(vec![2, 1]).unwrap(),
                Path::new(vec![2, 1, 0]).unwrap(),
            ],
            sets: vec![singleton(1, d.k), singleton(0, d.k)],
            ..u
        };
        let r = verify_unit(&g, &clipped, &d);
        assert!(r.violations.iter().any(|v| v.rule == "spoke_avoids_sets"));
    }
}
