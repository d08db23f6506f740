use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexSet};

/// Greedy independent set: repeatedly keep a minimum-degree vertex of the
/// remaining graph (smallest id on ties) and delete its closed neighbourhood.
/// The result has at least `sum_v 1/(d(v)+1)` vertices. Returned sorted.
pub fn caro_wei_greedy(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut chosen = Vec::new();
    let kill = |v: usize,
                alive: &mut Vec<bool>,
                degree: &mut Vec<usize>,
                queue: &mut BTreeSet<(usize, usize)>| {
        alive[v] = false;
        queue.remove(&(degree[v], v));
        for &w in g.neighbors(v) {
            if alive[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
    };
    while let Some((_, v)) = queue.pop_first() {
        chosen.push(v);
        let nbrs: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| alive[w])
            .collect();
        kill(v, &mut alive, &mut degree, &mut queue);
        for w in nbrs {
            kill(w, &mut alive, &mut degree, &mut queue);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Builds the conflict graph on `0..s` (`i ~ j` when `P_i` meets `S_j` or
/// `P_j` meets `S_i`) and returns a greedy independent set in it, so that
/// `S_i ∩ P_j = ∅` for distinct returned `i, j`. The size is at least
/// `ceil(s / (2 path_len_bound + 3))`.
pub fn conflict_prune(
    sets: &[VertexSet],
    paths: &[Path],
    path_len_bound: usize,
) -> Result<Vec<usize>> {
    if sets.len() != paths.len() {
        return Err(Error::InvalidParameter(format!(
            "{} sets but {} paths",
            sets.len(),
            paths.len()
        )));
    }
    let s = sets.len();
    let mut owner = std::collections::HashMap::new();
    for (i, set) in sets.iter().enumerate() {
        for v in set.iter() {
            if owner.insert(v, i).is_some() {
                return Err(Error::Overlap(v));
            }
        }
    }
    let mut edges = Vec::new();
    for (j, path) in paths.iter().enumerate() {
        if path.len() > path_len_bound {
            return Err(Error::InvalidParameter(format!(
                "path {j} has length {} above the bound {path_len_bound}",
                path.len()
            )));
        }
        for &v in path.vertices() {
            if let Some(&i) = owner.get(&v) {
                if i != j {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    let conflicts = Graph::from_edges(s, edges)?;
    let chosen = caro_wei_greedy(&conflicts);
    let guaranteed = s.div_ceil(2 * path_len_bound + 3);
    if chosen.len() < guaranteed {
        return Err(Error::Internal(format!(
            "conflict pruning kept {} of {s}, below {guaranteed}",
            chosen.len()
        )));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn path(v: Vec<usize>) -> Path {
        Path::new(v).unwrap()
    }

    #[test]
    fn greedy_on_small_families() {
        assert_eq!(caro_wei_greedy(&families::complete(5)), vec![0]);
        assert_eq!(caro_wei_greedy(&families::star(6)), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(caro_wei_greedy(&families::cycle(9)).len(), 4);
        assert_eq!(caro_wei_greedy(&Graph::empty(3)), vec![0, 1, 2]);
    }

    #[test]
    fn disjoint_paths_keep_everything() {
        let sets: Vec<VertexSet> = (0..4)
            .map(|i| VertexSet::from(vec![2 * i, 2 * i + 1]))
            .collect();
        let paths: Vec<Path> = (0..4).map(|i| path(vec![100 + i, 2 * i])).collect();
        assert_eq!(conflict_prune(&sets, &paths, 1).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn cyclic_conflicts() {
        // P_i ends in S_{i+1}: the conflict graph is a 9-cycle.
        let sets: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        let paths: Vec<Path> = (0..9).map(|i| path(vec![100 + i, (i + 1) % 9])).collect();
        let kept = conflict_prune(&sets, &paths, 1).unwrap();
        assert!(kept.len() >= 4);
        for &i in &kept {
            for &j in &kept {
                if i != j {
                    assert!(!paths[j].contains(i));
                }
            }
        }
    }

    #[test]
    fn rejects_overlong_paths_and_overlaps() {
        let sets = vec![VertexSet::singleton(0), VertexSet::singleton(0)];
        let paths = vec![path(vec![1]), path(vec![2])];
        assert!(matches!(
            conflict_prune(&sets, &paths, 0),
            Err(Error::Overlap(0))
        ));
        let sets = vec![VertexSet::singleton(0)];
        assert!(conflict_prune(&sets, &[path(vec![1, 2, 3])], 1).is_err());
    }
}
