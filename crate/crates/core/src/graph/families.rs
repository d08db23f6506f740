//! Small deterministic graph families used by examples, tests and the CLI.

use super::Graph;

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|u| (u - 1, u))).unwrap()
}

/// `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

/// `rows x cols` grid (no wraparound), vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).unwrap()
}

/// `side x side` torus; 4-regular for `side >= 3`.
pub fn grid_torus(side: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let v = r * side + c;
            edges.push((v, r * side + (c + 1) % side));
            edges.push((v, ((r + 1) % side) * side + c));
        }
    }
    Graph::from_edges(side * side, edges).unwrap()
}

/// Disjoint union, relabeling `b` after `a`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.n();
    Graph::from_edges(
        a.n() + b.n(),
        a.edges()
            .chain(b.edges().map(|(u, v)| (u + shift, v + shift))),
    )
    .unwrap()
}

/// `g` plus extra edges (endpoints may extend the vertex range up to `n`).
pub fn with_edges(g: &Graph, n: usize, extra: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n.max(g.n()), g.edges().chain(extra.iter().copied())).unwrap()
}
