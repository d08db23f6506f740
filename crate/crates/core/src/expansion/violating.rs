use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{floor_pow, small_set_rate, DerivedScales, ExpansionParams};
use crate::graph::{components, Graph, VertexSet};

/// Effort limits for the violating-set search on graphs too large to enumerate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Graphs with at most this many vertices are searched exhaustively (cap 20).
    pub exhaustive_limit: usize,
    /// Seeds for BFS-level sweeps.
    pub bfs_seeds: usize,
    /// Seeds for greedy low-boundary growth.
    pub local_seeds: usize,
    /// Largest set the greedy growth will build.
    pub local_max_size: usize,
    /// Optional wall-clock cap. Runs that hit it are no longer reproducible.
    pub time_limit_ms: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_limit: 18,
            bfs_seeds: 16,
            local_seeds: 8,
            local_max_size: 2048,
            time_limit_ms: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `|S| <= m^(1-eta)` and `|N(S)| < f(m)|S|`.
    Large,
    /// `|S| <= m^(1/3)` and `|N(S)| < delta/(20 (log log 4|S|)^2) |S|`.
    SmallSet,
}

/// A set that witnesses failure of the expansion property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violator {
    pub set: VertexSet,
    pub boundary: usize,
    pub kind: ViolationKind,
    /// The rate `gamma` the set falls short of.
    pub gamma: f64,
}

pub(crate) struct Criteria {
    m: usize,
    large_limit: usize,
    rate: f64,
    small: Option<(usize, f64)>,
    require_progress: bool,
}

impl Criteria {
    pub(crate) fn new(
        m: usize,
        rate: f64,
        p: &ExpansionParams,
        small_set_mode: bool,
        require_progress: bool,
    ) -> Self {
        Criteria {
            m,
            large_limit: floor_pow(m, 1.0 - p.eta),
            rate,
            small: small_set_mode.then(|| (floor_pow(m, 1.0 / 3.0), p.delta)),
            require_progress,
        }
    }

    fn max_size(&self) -> usize {
        self.large_limit.max(self.small.map_or(0, |s| s.0))
    }

    pub(crate) fn classify(&self, size: usize, boundary: usize) -> Option<(ViolationKind, f64)> {
        if size == 0 || size >= self.m {
            return None;
        }
        if self.require_progress && size + boundary >= self.m {
            return None;
        }
        if size <= self.large_limit && (boundary as f64) < self.rate * size as f64 {
            return Some((ViolationKind::Large, self.rate));
        }
        if let Some((limit, delta)) = self.small {
            let rate = small_set_rate(delta, size);
            if size <= limit && (boundary as f64) < rate * size as f64 {
                return Some((ViolationKind::SmallSet, rate));
            }
        }
        None
    }
}

/// Searches `h` for a set `S` (a proper subset) with `|S| <= m^(1-eta)` and
/// `|N(S)| < f(m)|S|`, plus, in small-set mode, sets with `|S| <= m^(1/3)`
/// and `|N(S)| < delta/(20 (log log 4|S|)^2) |S|`.
///
/// Exhaustive for small graphs, heuristic above that; `None` means no
/// violator was found and `h` is treated as an expander.
pub fn find_violating_set(
    h: &Graph,
    d: &DerivedScales,
    p: &ExpansionParams,
    small_set_mode: bool,
) -> Option<VertexSet> {
    find_violator(h, d, p, small_set_mode, &SearchBudget::default()).map(|v| v.set)
}

pub fn find_violator(
    h: &Graph,
    d: &DerivedScales,
    p: &ExpansionParams,
    small_set_mode: bool,
    budget: &SearchBudget,
) -> Option<Violator> {
    let criteria = Criteria::new(h.n(), d.rate(p), p, small_set_mode, false);
    search(h, &criteria, budget)
}

pub(crate) fn search(h: &Graph, criteria: &Criteria, budget: &SearchBudget) -> Option<Violator> {
    if h.n() < 2 {
        return None;
    }
    if h.n() <= budget.exhaustive_limit.min(20) {
        return exhaustive(h, criteria);
    }
    heuristic(h, criteria, budget)
}

fn make(set: Vec<usize>, boundary: usize, (kind, gamma): (ViolationKind, f64)) -> Violator {
    Violator {
        set: set.into_iter().collect(),
        boundary,
        kind,
        gamma,
    }
}

/// Include/exclude recursion with incremental boundary counts. Returns the
/// violator with the smallest `|N(S)|/|S|`, then smallest size, then
/// lexicographically smallest member list.
fn exhaustive(h: &Graph, criteria: &Criteria) -> Option<Violator> {
    struct State<'a> {
        h: &'a Graph,
        criteria: &'a Criteria,
        in_s: Vec<bool>,
        cover: Vec<u32>,
        members: Vec<usize>,
        best: Option<(Vec<usize>, usize, (ViolationKind, f64))>,
    }
    impl State<'_> {
        fn boundary(&self) -> usize {
            (0..self.h.n())
                .filter(|&v| !self.in_s[v] && self.cover[v] > 0)
                .count()
        }
        fn better(&self, size: usize, boundary: usize) -> bool {
            match &self.best {
                None => true,
                Some((set, b, _)) => {
                    let lhs = boundary * set.len();
                    let rhs = b * size;
                    lhs < rhs
                        || (lhs == rhs
                            && (size < set.len() || (size == set.len() && self.members < *set)))
                }
            }
        }
        fn go(&mut self, v: usize) {
            if v == self.h.n() {
                let size = self.members.len();
                if size == 0 {
                    return;
                }
                let boundary = self.boundary();
                if let Some(c) = self.criteria.classify(size, boundary) {
                    if self.better(size, boundary) {
                        self.best = Some((self.members.clone(), boundary, c));
                    }
                }
                return;
            }
            self.go(v + 1);
            if self.members.len() < self.criteria.max_size() {
                self.in_s[v] = true;
                self.members.push(v);
                for &w in self.h.neighbors(v) {
                    self.cover[w] += 1;
                }
                self.go(v + 1);
                for &w in self.h.neighbors(v) {
                    self.cover[w] -= 1;
                }
                self.members.pop();
                self.in_s[v] = false;
            }
        }
    }
    let mut st = State {
        h,
        criteria,
        in_s: vec![false; h.n()],
        cover: vec![0; h.n()],
        members: Vec::new(),
        best: None,
    };
    st.go(0);
    st.best.map(|(set, b, c)| make(set, b, c))
}

fn seeds(h: &Graph, count: usize, offset: usize) -> Vec<usize> {
    let n = h.n();
    if count == 0 || n == 0 {
        return Vec::new();
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (h.degree(v), v));
    let half = count.div_ceil(2);
    let mut out: Vec<usize> = by_degree.into_iter().skip(offset).take(half).collect();
    let spaced = count - out.len().min(count);
    for i in 0..spaced {
        let v = ((2 * i + 1) * n / (2 * spaced) + offset) % n;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn heuristic(h: &Graph, criteria: &Criteria, budget: &SearchBudget) -> Option<Violator> {
    let start = Instant::now();
    let out_of_time = || {
        budget
            .time_limit_ms
            .is_some_and(|ms| start.elapsed() > Duration::from_millis(ms))
    };

    // Components have empty boundary.
    let mut comps = components(h);
    comps.sort_by_key(|c| (c.len(), c.as_slice()[0]));
    for c in comps {
        if let Some(class) = criteria.classify(c.len(), 0) {
            return Some(make(c.into_vec(), 0, class));
        }
    }

    let limit = criteria.max_size();
    for seed in seeds(h, budget.bfs_seeds, 0) {
        if out_of_time() {
            return None;
        }
        if let Some(v) = bfs_sweep(h, seed, criteria, limit) {
            return Some(v);
        }
    }
    for seed in seeds(h, budget.local_seeds, budget.bfs_seeds / 2) {
        if out_of_time() {
            return None;
        }
        if let Some(v) = local_search(h, seed, criteria, limit.min(budget.local_max_size)) {
            return Some(v);
        }
    }
    None
}

/// Tests every BFS ball `B^j(seed)` with `|N(B^j)| = |layer j+1|`.
fn bfs_sweep(h: &Graph, seed: usize, criteria: &Criteria, limit: usize) -> Option<Violator> {
    let mut seen = vec![false; h.n()];
    seen[seed] = true;
    let mut ball = vec![seed];
    let mut frontier = vec![seed];
    loop {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in h.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if let Some(class) = criteria.classify(ball.len(), next.len()) {
            return Some(make(ball, next.len(), class));
        }
        if next.is_empty() || ball.len() + next.len() > limit {
            return None;
        }
        ball.extend_from_slice(&next);
        frontier = next;
    }
}

/// Greedy growth: repeatedly absorb the boundary vertex whose absorption
/// increases `|N(S)|` the least (smallest id on ties).
fn local_search(h: &Graph, seed: usize, criteria: &Criteria, max_size: usize) -> Option<Violator> {
    let n = h.n();
    let mut in_s = vec![false; n];
    let mut in_n = vec![false; n];
    let mut outside = vec![0i64; n];
    // Min-heap with lazy deletion: an entry is live while its key matches.
    let mut queue: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
    let mut members = vec![seed];
    let mut boundary = 0usize;
    in_s[seed] = true;

    let mut is_fresh = vec![false; n];

    let absorb = |u: usize,
                  in_s: &mut Vec<bool>,
                  in_n: &mut Vec<bool>,
                  is_fresh: &mut Vec<bool>,
                  outside: &mut Vec<i64>,
                  queue: &mut BinaryHeap<Reverse<(i64, usize)>>,
                  boundary: &mut usize| {
        let fresh: Vec<usize> = h
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&w| !in_s[w] && !in_n[w])
            .collect();
        for &w in &fresh {
            in_n[w] = true;
            is_fresh[w] = true;
        }
        *boundary += fresh.len();
        for &w in &fresh {
            for &x in h.neighbors(w) {
                if in_n[x] && !is_fresh[x] && x != u {
                    outside[x] -= 1;
                    queue.push(Reverse((outside[x] - 1, x)));
                }
            }
        }
        for &w in &fresh {
            outside[w] = h
                .neighbors(w)
                .iter()
                .filter(|&&x| !in_s[x] && !in_n[x])
                .count() as i64;
            queue.push(Reverse((outside[w] - 1, w)));
        }
        for &w in &fresh {
            is_fresh[w] = false;
        }
    };
    absorb(
        seed,
        &mut in_s,
        &mut in_n,
        &mut is_fresh,
        &mut outside,
        &mut queue,
        &mut boundary,
    );

    loop {
        if let Some(class) = criteria.classify(members.len(), boundary) {
            return Some(make(members, boundary, class));
        }
        if members.len() >= max_size {
            return None;
        }
        let u = loop {
            let Reverse((key, u)) = queue.pop()?;
            if in_n[u] && key == outside[u] - 1 {
                break u;
            }
        };
        in_n[u] = false;
        in_s[u] = true;
        boundary -= 1;
        members.push(u);
        absorb(
            u,
            &mut in_s,
            &mut in_n,
            &mut is_fresh,
            &mut outside,
            &mut queue,
            &mut boundary,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn params(eta: f64, n: usize) -> ExpansionParams {
        ExpansionParams::new(0.1, eta, n.max(3), 2).unwrap()
    }

    fn with_rate(h: &Graph, rate: f64, eta: f64) -> (DerivedScales, ExpansionParams) {
        let mut p = params(eta, h.n());
        p.lambda = Some(rate);
        (DerivedScales::new(h.n().max(3), &p).unwrap(), p)
    }

    #[test]
    fn complete_graph_has_no_violator_at_moderate_rate() {
        let k8 = families::complete(8);
        // |S| <= floor(8^(7/8)) = 6 leaves |N(S)| >= 2 >= 6/3.
        let (d, p) = with_rate(&k8, 1.0 / 3.0, 1.0 / 8.0);
        assert_eq!(find_violating_set(&k8, &d, &p, false), None);
        let (d, p) = with_rate(&k8, 1.0, 1.0 / 8.0);
        assert_eq!(find_violating_set(&k8, &d, &p, false).unwrap().len(), 6);
    }

    #[test]
    fn bridged_cliques_expose_one_side() {
        let two = families::with_edges(
            &families::disjoint_union(&families::complete(6), &families::complete(6)),
            12,
            &[(0, 6)],
        );
        let (d, p) = with_rate(&two, 0.5, 1.0 / 8.0);
        let s = find_violating_set(&two, &d, &p, false).unwrap();
        assert!(s == (0..6).collect() || s == (6..12).collect(), "{s:?}");
    }

    #[test]
    fn single_vertex_has_no_violator() {
        let g = Graph::empty(1);
        let p = params(0.5, 3);
        let d = DerivedScales::new(3, &p).unwrap();
        assert_eq!(find_violating_set(&g, &d, &p, false), None);
    }

    #[test]
    fn heuristic_finds_loosely_attached_blob() {
        // Two 30-cliques joined by one edge: far above the exhaustive limit.
        let g = families::with_edges(
            &families::disjoint_union(&families::complete(30), &families::complete(30)),
            60,
            &[(0, 30)],
        );
        let (d, p) = with_rate(&g, 0.1, 1.0 / 8.0);
        let v = find_violator(&g, &d, &p, false, &SearchBudget::default()).unwrap();
        assert!(v.boundary as f64 <= 0.1 * v.set.len() as f64);
        assert_eq!(v.set.len(), 30);
    }

    #[test]
    fn local_search_finds_pendant_clique() {
        // A 40-clique hanging off a long cycle by one edge; BFS seeds are
        // disabled so only the greedy growth can see it.
        let cyc = families::cycle(200);
        let g = families::with_edges(
            &families::disjoint_union(&cyc, &families::complete(40)),
            240,
            &[(0, 200)],
        );
        let (d, p) = with_rate(&g, 0.05, 1.0 / 8.0);
        let budget = SearchBudget {
            bfs_seeds: 0,
            local_seeds: 40,
            ..SearchBudget::default()
        };
        let v = find_violator(&g, &d, &p, false, &budget).unwrap();
        assert!((v.boundary as f64) < 0.05 * v.set.len() as f64);
    }

    #[test]
    fn small_set_rule_applies_only_in_small_set_mode() {
        // At m = 10^6, a 100-set with one neighbour beats the small-set rate
        // delta / (20 (log log 400)^2) * 100 > 1 for delta = 0.9.
        let mut p = ExpansionParams::new(0.9, 1.0 / 8.0, 1_000_000, 2).unwrap();
        p.lambda = Some(1e-6);
        assert!(small_set_rate(0.9, 100) * 100.0 > 1.0);
        let small = Criteria::new(1_000_000, 1e-6, &p, true, false);
        assert_eq!(
            small.classify(100, 1).map(|c| c.0),
            Some(ViolationKind::SmallSet)
        );
        // 101 > floor(10^6^(1/3)) = 100.
        assert_eq!(small.classify(101, 1), None);
        let plain = Criteria::new(1_000_000, 1e-6, &p, false, false);
        assert_eq!(plain.classify(100, 1), None);
        assert_eq!(
            plain.classify(100, 0).map(|c| c.0),
            Some(ViolationKind::Large)
        );
    }
}
