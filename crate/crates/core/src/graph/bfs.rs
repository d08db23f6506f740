use super::Graph;

pub(crate) const UNREACHED: usize = usize::MAX;

/// Result of a layered breadth-first search. Each layer is processed in
/// increasing vertex order, so parents are the smallest-id predecessors.
pub(crate) struct Layered {
    pub dist: Vec<usize>,
    pub parent: Vec<usize>,
    /// Reached vertices in layer order.
    pub order: Vec<usize>,
    /// Number of completed expansion steps.
    pub radius: usize,
}

impl Layered {
    pub fn reached(&self, v: usize) -> bool {
        self.dist[v] != UNREACHED
    }

    /// Walks parents back from `v` to a source; returned source-first.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        debug_assert!(self.reached(v));
        let mut out = vec![v];
        let mut cur = v;
        while self.dist[cur] > 0 {
            cur = self.parent[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }
}

/// Multi-source BFS restricted to vertices accepted by `allowed` (sources are
/// always included). Stops after `max_radius` expansions, when no new vertex
/// is reached, or at the end of the first layer at which at least `stop_size`
/// vertices have been reached.
pub(crate) fn bfs_layers<F>(
    g: &Graph,
    sources: &[usize],
    allowed: F,
    max_radius: usize,
    stop_size: usize,
) -> Layered
where
    F: Fn(usize) -> bool,
{
    let n = g.n();
    let mut dist = vec![UNREACHED; n];
    let mut parent = vec![UNREACHED; n];
    let mut frontier: Vec<usize> = Vec::new();
    for &s in sources {
        if dist[s] == UNREACHED {
            dist[s] = 0;
            frontier.push(s);
        }
    }
    frontier.sort_unstable();
    let mut order = frontier.clone();
    let mut radius = 0;
    while radius < max_radius && order.len() < stop_size && !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if dist[w] == UNREACHED && allowed(w) {
                    dist[w] = radius + 1;
                    parent[w] = u;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        radius += 1;
        order.extend_from_slice(&next);
        frontier = next;
    }
    Layered {
        dist,
        parent,
        order,
        radius,
    }
}

/// Full BFS within `allowed` from a single source.
pub(crate) fn bfs_from<F>(g: &Graph, source: usize, allowed: F) -> Layered
where
    F: Fn(usize) -> bool,
{
    bfs_layers(g, &[source], allowed, usize::MAX, usize::MAX)
}

/// A shortest `from -> to` path inside `allowed` (endpoints always admitted).
pub(crate) fn shortest_path<F>(g: &Graph, from: usize, to: usize, allowed: F) -> Option<Vec<usize>>
where
    F: Fn(usize) -> bool,
{
    if from == to {
        return Some(vec![from]);
    }
    let n = g.n();
    let mut parent = vec![UNREACHED; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut frontier = vec![from];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if !seen[w] && (w == to || allowed(w)) {
                    seen[w] = true;
                    parent[w] = u;
                    if w == to {
                        let mut out = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = parent[cur];
                            out.push(cur);
                        }
                        out.reverse();
                        return Some(out);
                    }
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    None
}

/// Keeps the `size` vertices of `ball` closest to its BFS sources, removing the
/// farthest first and, among equally far vertices, the larger id first.
/// The result stays connected around the sources with the same radius bound.
pub(crate) fn trim_ball(ball: &Layered, size: usize) -> Vec<usize> {
    let mut members: Vec<usize> = ball.order.clone();
    members.sort_by_key(|&v| (ball.dist[v], v));
    members.truncate(size);
    members
}
