use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{floor_pow, small_set_rate};
use crate::graph::{Graph, Path, VertexSet};
use crate::minor::MinorModel;
use crate::subdivision::SubdivisionModel;

pub const MINOR_ORACLE_MAX_N: usize = 14;
pub const MINOR_ORACLE_MAX_T: usize = 5;
pub const EXPANDER_ORACLE_MAX_M: usize = 18;
pub const SUBDIVISION_ORACLE_MAX_N: usize = 12;
pub const SUBDIVISION_ORACLE_MAX_T: usize = 5;

fn neighbor_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect()
}

fn mask_neighbors(nbr: &[u32], mut mask: u32) -> u32 {
    let mut out = 0;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        out |= nbr[v];
        mask &= mask - 1;
    }
    out
}

fn flood(nbr: &[u32], start: usize, within: u32) -> u32 {
    let mut reached = 1u32 << start;
    loop {
        let grown = (reached | mask_neighbors(nbr, reached)) & within;
        if grown == reached {
            return reached;
        }
        reached = grown;
    }
}

fn is_connected_mask(nbr: &[u32], mask: u32) -> bool {
    mask != 0 && flood(nbr, mask.trailing_zeros() as usize, mask) == mask
}

fn mask_to_set(mask: u32) -> VertexSet {
    (0..32).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Whether `g` has a `K_t` minor, by exhaustive search (`n <= 14`, `t <= 5`).
pub fn brute_force_has_minor(g: &Graph, t: usize) -> Result<bool> {
    Ok(brute_force_find_minor(g, t)?.is_some())
}

/// Exhaustive `K_t` minor search over disjoint connected branch sets
/// (`n <= 14`, `t <= 5`). Branch sets are chosen in increasing order of their
/// smallest vertex; the last one is taken as a whole component of what is
/// left. Vertices of degree at most one are stripped first when `t >= 3`,
/// which never destroys a model.
pub fn brute_force_find_minor(g: &Graph, t: usize) -> Result<Option<MinorModel>> {
    let n = g.n();
    if n > MINOR_ORACLE_MAX_N || t > MINOR_ORACLE_MAX_T {
        return Err(Error::LimitExceeded(format!(
            "minor oracle handles n <= {MINOR_ORACLE_MAX_N} and t <= {MINOR_ORACLE_MAX_T}, got n = {n}, t = {t}"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if n < t {
        return Ok(None);
    }
    if t == 1 {
        return Ok(Some(MinorModel::new(1, vec![VertexSet::singleton(0)])));
    }
    if t == 2 {
        return Ok(g.edges().next().map(|(u, v)| {
            MinorModel::new(2, vec![VertexSet::singleton(u), VertexSet::singleton(v)])
        }));
    }
    let nbr = neighbor_masks(g);
    let mut active: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    loop {
        let low = (0..n).find(|&v| active & (1 << v) != 0 && (nbr[v] & active).count_ones() <= 1);
        match low {
            Some(v) => active &= !(1 << v),
            None => break,
        }
    }
    let mut connected: Vec<u32> = Vec::new();
    let mut sub = active;
    while sub != 0 {
        if is_connected_mask(&nbr, sub) {
            connected.push(sub);
        }
        sub = (sub - 1) & active;
    }
    connected.sort_by_key(|&m| (m.count_ones(), m));
    let search = MinorSearch {
        nbr: &nbr,
        t,
        connected: &connected,
    };
    let mut chosen = Vec::with_capacity(t);
    Ok(search
        .go(&mut chosen, active, None)
        .then(|| MinorModel::new(t, chosen.iter().map(|&m| mask_to_set(m)).collect())))
}

struct MinorSearch<'a> {
    nbr: &'a [u32],
    t: usize,
    connected: &'a [u32],
}

impl MinorSearch<'_> {
    fn touches_all(&self, mask: u32, chosen: &[u32]) -> bool {
        let around = mask_neighbors(self.nbr, mask);
        chosen.iter().all(|&c| around & c != 0)
    }

    /// Components of `allowed` that could host the remaining `left` sets.
    fn hosts(&self, allowed: u32, chosen: &[u32], left: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut rest = allowed;
        while rest != 0 {
            let comp = flood(self.nbr, rest.trailing_zeros() as usize, rest);
            rest &= !comp;
            if (comp.count_ones() as usize) < left {
                continue;
            }
            let ok = chosen
                .iter()
                .all(|&c| (mask_neighbors(self.nbr, c) & comp).count_ones() as usize >= left);
            if ok {
                out.push(comp);
            }
        }
        out
    }

    fn go(&self, chosen: &mut Vec<u32>, allowed: u32, last_min: Option<u32>) -> bool {
        let left = self.t - chosen.len();
        if left == 1 {
            for comp in self.hosts(allowed, chosen, 1) {
                if self.touches_all(comp, chosen) {
                    chosen.push(comp);
                    return true;
                }
            }
            return false;
        }
        for &x in self.connected {
            if x & !allowed != 0 {
                continue;
            }
            if last_min.is_some_and(|m| x.trailing_zeros() <= m) {
                continue;
            }
            if !self.touches_all(x, chosen) {
                continue;
            }
            chosen.push(x);
            for host in self.hosts(allowed & !x, chosen, left - 1) {
                if self.go(chosen, host, Some(x.trailing_zeros())) {
                    return true;
                }
            }
            chosen.pop();
        }
        false
    }
}

/// Outcome of [`brute_force_expander_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCheck {
    pub holds: bool,
    /// The tested set minimising `|N(S)|/|S|`.
    pub worst_set: Option<VertexSet>,
    pub worst_ratio: f64,
    /// The violating set minimising `|N(S)|/|S|`, if any.
    pub violator: Option<VertexSet>,
}

/// Tests every nonempty proper subset `S` with `|S| <= m^(1-eta)` for
/// `|N(S)| >= rate |S|`, and, with `small_set = Some(delta)`, every `S` with
/// `|S| <= m^(1/3)` for `|N(S)| >= delta/(20 (log log 4|S|)^2) |S|`
/// (`m <= 18`). Ties between equally bad sets go to the smaller set, then
/// the lexicographically smaller member list.
pub fn brute_force_expander_check(
    h: &Graph,
    rate: f64,
    eta: f64,
    small_set: Option<f64>,
) -> Result<ExpanderCheck> {
    let m = h.n();
    if m > EXPANDER_ORACLE_MAX_M {
        return Err(Error::LimitExceeded(format!(
            "expander oracle handles m <= {EXPANDER_ORACLE_MAX_M}, got {m}"
        )));
    }
    let large_limit = floor_pow(m, 1.0 - eta);
    let small_limit = floor_pow(m, 1.0 / 3.0);
    let nbr = neighbor_masks(h);
    let full: u32 = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let mut around = vec![0u32; 1 << m];
    type Best = Option<(u32, u32, u32)>;
    let better = |best: &Best, mask: u32, size: u32, boundary: u32| match *best {
        None => true,
        Some((bm, bs, bb)) => {
            let (lhs, rhs) = (boundary as u64 * bs as u64, bb as u64 * size as u64);
            lhs < rhs || (lhs == rhs && (size < bs || (size == bs && lex_less(mask, bm))))
        }
    };
    let (mut worst, mut violator): (Best, Best) = (None, None);
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        around[mask as usize] = around[(mask & (mask - 1)) as usize] | nbr[low];
        let size = mask.count_ones();
        let in_large = size as usize <= large_limit;
        let in_small = small_set.is_some() && size as usize <= small_limit;
        if !in_large && !in_small {
            continue;
        }
        let boundary = (around[mask as usize] & !mask).count_ones();
        if better(&worst, mask, size, boundary) {
            worst = Some((mask, size, boundary));
        }
        let violates = (in_large && (boundary as f64) < rate * size as f64)
            || small_set.is_some_and(|delta| {
                in_small && (boundary as f64) < small_set_rate(delta, size as usize) * size as f64
            });
        if violates && better(&violator, mask, size, boundary) {
            violator = Some((mask, size, boundary));
        }
    }
    Ok(ExpanderCheck {
        holds: violator.is_none(),
        worst_set: worst.map(|w| mask_to_set(w.0)),
        worst_ratio: worst.map_or(f64::INFINITY, |w| w.2 as f64 / w.1 as f64),
        violator: violator.map(|w| mask_to_set(w.0)),
    })
}

/// Lexicographic comparison of the sorted member lists of two masks.
fn lex_less(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    while a != 0 && b != 0 {
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x < y;
        }
        a &= a - 1;
        b &= b - 1;
    }
    a == 0 && b != 0
}

/// Exhaustive `K_t` subdivision search (`n <= 12`, `t <= 5`): tries every
/// corner set and backtracks over internally disjoint simple paths, pruning
/// when some remaining corner pair has no path left.
pub fn brute_force_find_subdivision(g: &Graph, t: usize) -> Result<Option<SubdivisionModel>> {
    let n = g.n();
    if n > SUBDIVISION_ORACLE_MAX_N || t > SUBDIVISION_ORACLE_MAX_T {
        return Err(Error::LimitExceeded(format!(
            "subdivision oracle handles n <= {SUBDIVISION_ORACLE_MAX_N} and t <= {SUBDIVISION_ORACLE_MAX_T}, got n = {n}, t = {t}"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if n < t {
        return Ok(None);
    }
    let nbr = neighbor_masks(g);
    let candidates: Vec<usize> = (0..n).filter(|&v| g.degree(v) + 1 >= t).collect();
    let pairs: Vec<(usize, usize)> = (0..t)
        .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
        .collect();
    let mut corners = Vec::with_capacity(t);
    let mut found = None;
    choose_corners(&candidates, 0, t, &mut corners, &mut |cs| {
        let corner_mask = cs.iter().fold(0u32, |m, &c| m | (1 << c));
        let free = ((1u32 << n) - 1) & !corner_mask;
        let mut paths = Vec::with_capacity(pairs.len());
        if route_pairs(g, &nbr, cs, &pairs, free, &mut paths) {
            let edge_paths: BTreeMap<(usize, usize), Path> = pairs
                .iter()
                .zip(paths)
                .map(|(&k, p)| (k, Path::from_vec_unchecked(p)))
                .collect();
            found = Some(SubdivisionModel::new(cs.to_vec(), edge_paths));
            true
        } else {
            false
        }
    });
    Ok(found)
}

fn choose_corners(
    candidates: &[usize],
    from: usize,
    t: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == t {
        return visit(chosen);
    }
    for idx in from..candidates.len() {
        if candidates.len() - idx < t - chosen.len() {
            break;
        }
        chosen.push(candidates[idx]);
        if choose_corners(candidates, idx + 1, t, chosen, visit) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn reachable(nbr: &[u32], a: usize, b: usize, free: u32) -> bool {
    if nbr[a] & (1 << b) != 0 {
        return true;
    }
    let start = nbr[a] & free;
    if start == 0 {
        return false;
    }
    let mut reached = start;
    loop {
        if mask_neighbors(nbr, reached) & (1 << b) != 0 {
            return true;
        }
        let grown = (reached | mask_neighbors(nbr, reached)) & free;
        if grown == reached {
            return false;
        }
        reached = grown;
    }
}

fn route_pairs(
    g: &Graph,
    nbr: &[u32],
    corners: &[usize],
    pairs: &[(usize, usize)],
    free: u32,
    paths: &mut Vec<Vec<usize>>,
) -> bool {
    let k = paths.len();
    if k == pairs.len() {
        return true;
    }
    if pairs[k..]
        .iter()
        .any(|&(i, j)| !reachable(nbr, corners[i], corners[j], free))
    {
        return false;
    }
    let (a, b) = (corners[pairs[k].0], corners[pairs[k].1]);
    let mut current = vec![a];
    extend_path(g, b, free, &mut current, &mut |p, used| {
        paths.push(p.to_vec());
        if route_pairs(g, nbr, corners, pairs, free & !used, paths) {
            return true;
        }
        paths.pop();
        false
    })
}

/// Enumerates simple paths from `current`'s last vertex to `target` whose
/// interior lies in `free`, calling `visit` with each and the interior mask.
fn extend_path(
    g: &Graph,
    target: usize,
    free: u32,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], u32) -> bool,
) -> bool {
    let last = *current.last().expect("path starts nonempty");
    for &w in g.neighbors(last) {
        if w == target {
            current.push(w);
            let interior = current[1..current.len() - 1]
                .iter()
                .fold(0u32, |m, &v| m | (1 << v));
            let done = visit(current, interior);
            current.pop();
            if done {
                return true;
            }
        } else if free & (1 << w) != 0 && !current.contains(&w) {
            current.push(w);
            let done = extend_path(g, target, free, current, visit);
            current.pop();
            if done {
                return true;
            }
        }
    }
    false
}
