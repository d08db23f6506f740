use super::{bfs_from, bfs_layers, Density, Graph, Path, VertexSet, UNREACHED};
use crate::error::{Error, Result};

/// `2e/n` as an exact rational.
pub fn average_degree(g: &Graph) -> Result<Density> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Density::new(2 * g.edge_count() as u64, g.n() as u64))
}

fn check_disjoint(g: &Graph, s: &VertexSet, avoid: &VertexSet) -> Result<()> {
    s.check_range(g.n())?;
    avoid.check_range(g.n())?;
    match s.first_common(avoid) {
        Some(v) => Err(Error::Overlap(v)),
        None => Ok(()),
    }
}

/// `N_{G-avoid}(S)`: neighbours of `s` lying outside both `s` and `avoid`.
pub fn neighborhood(g: &Graph, s: &VertexSet, avoid: &VertexSet) -> Result<VertexSet> {
    check_disjoint(g, s, avoid)?;
    let mut blocked = s.to_mask(g.n());
    for v in avoid.iter() {
        blocked[v] = true;
    }
    let mut out = Vec::new();
    let mut seen = vec![false; g.n()];
    for u in s.iter() {
        for &w in g.neighbors(u) {
            if !blocked[w] && !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `B^radius_{G-avoid}(S)`; radius 0 returns `s` itself.
pub fn ball(g: &Graph, s: &VertexSet, radius: usize, avoid: &VertexSet) -> Result<VertexSet> {
    check_disjoint(g, s, avoid)?;
    let avoid_mask = avoid.to_mask(g.n());
    let layers = bfs_layers(g, s.as_slice(), |v| !avoid_mask[v], radius, usize::MAX);
    Ok(layers.order.into_iter().collect())
}

/// The vertex of `s` minimising its eccentricity inside `G[S]`, with that
/// eccentricity. Ties go to the smallest id.
pub fn set_radius_center(g: &Graph, s: &VertexSet) -> Result<(usize, usize)> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    s.check_range(g.n())?;
    let mask = s.to_mask(g.n());
    let mut best: Option<(usize, usize)> = None;
    for v in s.iter() {
        let dist = bfs_from(g, v, |w| mask[w]).dist;
        let mut ecc = 0;
        for w in s.iter() {
            if dist[w] == UNREACHED {
                return Err(Error::NotConnected);
            }
            ecc = ecc.max(dist[w]);
        }
        if best.is_none_or(|(_, r)| ecc < r) {
            best = Some((v, ecc));
        }
    }
    Ok(best.expect("nonempty set"))
}

/// Eccentricity of `center` within `G[S]`, or `None` if `G[S]` does not reach
/// every member from it.
pub fn radius_from(g: &Graph, s: &VertexSet, center: usize) -> Option<usize> {
    if !s.contains(center) {
        return None;
    }
    let mask = s.to_mask(g.n());
    let dist = bfs_from(g, center, |w| mask[w]).dist;
    s.iter()
        .map(|w| dist[w])
        .try_fold(0, |acc, d| (d != UNREACHED).then_some(acc.max(d)))
}

/// Output of [`consecutive_shortest_paths`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsecutivePaths {
    pub paths: Vec<Path>,
    /// Index of the first target that became unreachable, if any.
    pub failed_at: Option<usize>,
}

/// Paths `P_1, P_2, ...` from `v` where `P_i` is a shortest path to
/// `targets[i]` inside `domain` minus the earlier paths (keeping `v`).
pub fn consecutive_shortest_paths(
    g: &Graph,
    v: usize,
    domain: &VertexSet,
    targets: &[usize],
) -> Result<ConsecutivePaths> {
    domain.check_range(g.n())?;
    if !domain.contains(v) {
        return Err(Error::NotInDomain(v));
    }
    if let Some(&t) = targets.iter().find(|&&t| !domain.contains(t)) {
        return Err(Error::NotInDomain(t));
    }
    let mut open = domain.to_mask(g.n());
    let mut paths = Vec::with_capacity(targets.len());
    for (i, &target) in targets.iter().enumerate() {
        if !open[target] {
            return Ok(ConsecutivePaths {
                paths,
                failed_at: Some(i),
            });
        }
        match super::shortest_path(g, v, target, |w| open[w]) {
            Some(p) => {
                for &w in &p[1..] {
                    open[w] = false;
                }
                paths.push(Path::from_vec_unchecked(p));
            }
            None => {
                return Ok(ConsecutivePaths {
                    paths,
                    failed_at: Some(i),
                })
            }
        }
    }
    Ok(ConsecutivePaths {
        paths,
        failed_at: None,
    })
}

/// Bijection between the vertices of an induced subgraph and its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    to_host: Vec<usize>,
    to_sub: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap {
            to_host: (0..n).collect(),
            to_sub: (0..n).map(Some).collect(),
        }
    }

    pub fn to_host(&self, v: usize) -> usize {
        self.to_host[v]
    }

    pub fn to_sub(&self, host: usize) -> Option<usize> {
        self.to_sub.get(host).copied().flatten()
    }

    pub fn host_vertices(&self) -> &[usize] {
        &self.to_host
    }

    pub fn len(&self) -> usize {
        self.to_host.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_host.is_empty()
    }

    pub fn set_to_host(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.to_host[v]).collect()
    }

    pub fn path_to_host(&self, p: &Path) -> Path {
        Path::from_vec_unchecked(p.vertices().iter().map(|&v| self.to_host[v]).collect())
    }

    /// Composes `self` (sub -> mid) with `outer` (mid -> host).
    pub fn compose(&self, outer: &VertexMap) -> VertexMap {
        let to_host: Vec<usize> = self.to_host.iter().map(|&v| outer.to_host(v)).collect();
        let mut to_sub = vec![None; outer.to_sub.len()];
        for (i, &h) in to_host.iter().enumerate() {
            to_sub[h] = Some(i);
        }
        VertexMap { to_host, to_sub }
    }
}

/// `G[S]` relabeled to `0..|S|` in increasing host-id order.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<(Graph, VertexMap)> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    s.check_range(g.n())?;
    Ok(induced_by_mask(g, &s.to_mask(g.n())))
}

pub(crate) fn induced_by_mask(g: &Graph, mask: &[bool]) -> (Graph, VertexMap) {
    let mut to_sub = vec![None; g.n()];
    let mut to_host = Vec::new();
    for (v, &keep) in mask.iter().enumerate() {
        if keep {
            to_sub[v] = Some(to_host.len());
            to_host.push(v);
        }
    }
    let mut adjacency = Vec::with_capacity(to_host.len());
    let mut twice = 0;
    for &v in &to_host {
        let list: Vec<usize> = g.neighbors(v).iter().filter_map(|&w| to_sub[w]).collect();
        twice += list.len();
        adjacency.push(list);
    }
    (
        Graph {
            adjacency,
            edge_count: twice / 2,
        },
        VertexMap { to_host, to_sub },
    )
}

/// Connected components in increasing order of their smallest vertex.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for v in 0..g.n() {
        if !seen[v] {
            let comp = bfs_from(g, v, |_| true).order;
            for &w in &comp {
                seen[w] = true;
            }
            out.push(comp.into_iter().collect());
        }
    }
    out
}

pub fn is_connected_set(g: &Graph, s: &VertexSet) -> bool {
    match s.as_slice().first() {
        None => false,
        Some(&v) => radius_from(g, s, v).is_some(),
    }
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![UNREACHED; n];
    let mut parent = vec![UNREACHED; n];
    for root in 0..n {
        let mut touched = vec![root];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        for v in touched {
            dist[v] = UNREACHED;
            parent[v] = UNREACHED;
        }
        if best == 3 {
            break;
        }
    }
    (best != usize::MAX).then_some(best)
}
