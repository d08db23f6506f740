use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::violating::{search, Criteria, SearchBudget};
use super::{DerivedScales, ExpansionParams};
use crate::error::{Error, Result};
use crate::graph::{
    average_degree, density_to_big, exact_rational, induced_by_mask, neighborhood, Density, Graph,
    VertexMap, VertexSet,
};

/// A set `S` together with the rate `gamma` it violates: `|N(S)| < gamma |S|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindDenseQuery {
    pub gamma: f64,
    pub s: VertexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Continue in `G - S`, whose density did not drop.
    DropS,
    /// Continue in `G[S ∪ N(S)]`, which keeps a `(1 - gamma)` share of the density.
    ContractToBall,
}

/// Edge and vertex counts of the two candidate successors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DichotomyCounts {
    pub rest_vertices: usize,
    pub rest_edges: usize,
    pub ball_vertices: usize,
    pub ball_edges: usize,
}

/// Picks the branch from counts alone: `DropS` iff `G - S` is nonempty and
/// `d(G - S) >= c`. For `ContractToBall` the promised `d(B(S)) >= (1-gamma)c`
/// is checked and its failure reported as an internal error.
pub fn dichotomy_branch(counts: &DichotomyCounts, c: &BigRational, gamma: f64) -> Result<Branch> {
    let density = |e: usize, n: usize| BigRational::new(BigInt::from(2 * e), BigInt::from(n));
    if counts.rest_vertices > 0 && density(counts.rest_edges, counts.rest_vertices) >= *c {
        return Ok(Branch::DropS);
    }
    let promised = (BigRational::from_integer(1.into()) - exact_rational(gamma)) * c;
    if counts.ball_vertices == 0 || density(counts.ball_edges, counts.ball_vertices) < promised {
        return Err(Error::Internal(format!(
            "dichotomy guarantee failed: {counts:?}, c = {c}, gamma = {gamma}"
        )));
    }
    Ok(Branch::ContractToBall)
}

/// Result of one dichotomy step: the branch and the successor graph with its
/// map into `g`.
#[derive(Clone, Debug)]
pub struct DichotomyOutcome {
    pub branch: Branch,
    pub graph: Graph,
    pub map: VertexMap,
}

/// Given `|N(S)| < gamma |S|` and `c = d(G)`, returns `G - S` when
/// `d(G - S) >= c` and `G[B(S)]` otherwise.
pub fn dichotomy_step(g: &Graph, q: &FindDenseQuery, c: Density) -> Result<DichotomyOutcome> {
    if q.s.is_empty() {
        return Err(Error::EmptySet);
    }
    let nbhd = neighborhood(g, &q.s, &VertexSet::new())?;
    let lhs = BigRational::from_integer(BigInt::from(nbhd.len()));
    let rhs = exact_rational(q.gamma) * BigRational::from_integer(BigInt::from(q.s.len()));
    if lhs >= rhs {
        return Err(Error::NotViolating {
            neighbors: nbhd.len(),
            size: q.s.len(),
            gamma: q.gamma,
        });
    }
    let in_s = q.s.to_mask(g.n());
    let mut in_ball = in_s.clone();
    for v in nbhd.iter() {
        in_ball[v] = true;
    }
    let (mut rest_edges, mut ball_edges) = (0, 0);
    for (u, v) in g.edges() {
        if !in_s[u] && !in_s[v] {
            rest_edges += 1;
        }
        if in_ball[u] && in_ball[v] {
            ball_edges += 1;
        }
    }
    let counts = DichotomyCounts {
        rest_vertices: g.n() - q.s.len(),
        rest_edges,
        ball_vertices: q.s.len() + nbhd.len(),
        ball_edges,
    };
    let branch = dichotomy_branch(&counts, &density_to_big(c), q.gamma)?;
    let mask: Vec<bool> = match branch {
        Branch::DropS => in_s.iter().map(|&x| !x).collect(),
        Branch::ContractToBall => in_ball,
    };
    let (graph, map) = induced_by_mask(g, &mask);
    Ok(DichotomyOutcome { branch, graph, map })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMode {
    PlainExpander,
    SmallSetExpander,
    /// Stopped at the size floor before the expansion property was established.
    BelowThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepAction {
    MinDegreePeel,
    DropSet,
    ContractToBall,
}

/// One step of the extraction, with `set` in input-graph ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub index: usize,
    pub action: StepAction,
    pub set_size: usize,
    pub set: VertexSet,
    pub density_before: f64,
    pub density_after: f64,
}

#[derive(Clone, Debug)]
pub struct ExtractionResult {
    pub subgraph: Graph,
    /// Map from `subgraph` ids to input-graph ids.
    pub map: VertexMap,
    pub mode: ExtractionMode,
    pub trace: Vec<TraceStep>,
    pub input_density: Density,
    pub achieved_density: Density,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractOptions {
    /// Stop once the current graph has fewer than `max(t + 1, floor, 3)` vertices.
    pub floor: usize,
    /// Also stop at the order `2^(16/eta)` (`2^(24/eta)` for small sets)
    /// below which the density accounting is not guaranteed.
    pub respect_theoretical_threshold: bool,
    pub budget: SearchBudget,
    pub record_trace: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            floor: 32,
            respect_theoretical_threshold: false,
            budget: SearchBudget::default(),
            record_trace: true,
        }
    }
}

/// Extracts a subgraph that keeps most of the density of `g`, has minimum
/// degree at least half its average degree, and in which the violating-set
/// search finds nothing.
pub fn extract_expander(
    g: &Graph,
    p: &ExpansionParams,
    small_set_mode: bool,
) -> Result<ExtractionResult> {
    extract_expander_with(g, p, small_set_mode, &ExtractOptions::default())
}

fn to_f64(d: Density) -> f64 {
    *d.numer() as f64 / *d.denom() as f64
}

pub fn extract_expander_with(
    g: &Graph,
    p: &ExpansionParams,
    small_set_mode: bool,
    opts: &ExtractOptions,
) -> Result<ExtractionResult> {
    p.validate()?;
    let input_density = average_degree(g)?;
    let floor = opts.floor.max(p.t + 1).max(3);
    let exponent = if small_set_mode { 24.0 } else { 16.0 };
    let mut current = g.clone();
    let mut map = VertexMap::identity(g.n());
    let mut trace = Vec::new();

    let mode = loop {
        peel(
            &mut current,
            &mut map,
            opts.record_trace.then_some(&mut trace),
        );
        let m = current.n();
        if m < floor
            || (opts.respect_theoretical_threshold && (m as f64).log2() <= exponent / p.eta)
        {
            break ExtractionMode::BelowThreshold;
        }
        let scales = DerivedScales::new(m, p)?;
        let criteria = Criteria::new(m, scales.rate(p), p, small_set_mode, true);
        let Some(violator) = search(&current, &criteria, &opts.budget) else {
            break if small_set_mode {
                ExtractionMode::SmallSetExpander
            } else {
                ExtractionMode::PlainExpander
            };
        };
        let before = average_degree(&current)?;
        let query = FindDenseQuery {
            gamma: violator.gamma,
            s: violator.set,
        };
        let outcome = dichotomy_step(&current, &query, before)?;
        log::debug!(
            "extraction: {:?} with |S| = {} at m = {m}",
            outcome.branch,
            query.s.len()
        );
        let next_map = outcome.map.compose(&map);
        if opts.record_trace {
            trace.push(TraceStep {
                index: trace.len(),
                action: match outcome.branch {
                    Branch::DropS => StepAction::DropSet,
                    Branch::ContractToBall => StepAction::ContractToBall,
                },
                set_size: query.s.len(),
                set: map.set_to_host(&query.s),
                density_before: to_f64(before),
                density_after: to_f64(average_degree(&outcome.graph)?),
            });
        }
        current = outcome.graph;
        map = next_map;
    };

    let achieved_density = average_degree(&current)?;
    let factor = if small_set_mode {
        1.0 - 2.0 * p.delta
    } else {
        1.0 - p.delta
    };
    if density_to_big(achieved_density) < exact_rational(factor) * density_to_big(input_density) {
        return Err(Error::Internal(format!(
            "extracted density {achieved_density} below {factor} * {input_density}"
        )));
    }
    if (current.min_degree() as u64) * (current.n() as u64) < current.edge_count() as u64 {
        return Err(Error::Internal(
            "extracted graph has a vertex below half the average degree".into(),
        ));
    }
    Ok(ExtractionResult {
        subgraph: current,
        map,
        mode,
        trace,
        input_density,
        achieved_density,
    })
}

/// Removes minimum-degree vertices (smallest id first) while the minimum
/// degree is below half the average degree. Each removal never lowers the
/// average degree.
fn peel(g: &mut Graph, map: &mut VertexMap, mut trace: Option<&mut Vec<TraceStep>>) {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut alive = vec![true; n];
    let (mut vertices, mut edges) = (n as u64, g.edge_count() as u64);
    let mut removed = false;
    while let Some(&(d, v)) = queue.first() {
        if (d as u64) * vertices >= edges {
            break;
        }
        queue.pop_first();
        alive[v] = false;
        let before = 2.0 * edges as f64 / vertices as f64;
        vertices -= 1;
        edges -= d as u64;
        for &w in g.neighbors(v) {
            if alive[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
        removed = true;
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(TraceStep {
                index: trace.len(),
                action: StepAction::MinDegreePeel,
                set_size: 1,
                set: VertexSet::singleton(map.to_host(v)),
                density_before: before,
                density_after: 2.0 * edges as f64 / vertices as f64,
            });
        }
    }
    if removed {
        let (sub, sub_map) = induced_by_mask(g, &alive);
        *map = sub_map.compose(map);
        *g = sub;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn params(delta: f64, eta: f64, n: usize) -> ExpansionParams {
        ExpansionParams::new(delta, eta, n, 2).unwrap()
    }

    #[test]
    fn drop_branch_for_disjoint_cliques() {
        let g = families::disjoint_union(&families::complete(5), &families::complete(5));
        let q = FindDenseQuery {
            gamma: 0.5,
            s: (0..5).collect(),
        };
        let out = dichotomy_step(&g, &q, average_degree(&g).unwrap()).unwrap();
        assert_eq!(out.branch, Branch::DropS);
        assert_eq!(out.map.host_vertices(), &[5, 6, 7, 8, 9]);
        assert_eq!(
            average_degree(&out.graph).unwrap(),
            Density::from_integer(4)
        );
    }

    #[test]
    fn drop_branch_for_pendant_vertex() {
        let g = families::with_edges(&families::complete(5), 6, &[(0, 5)]);
        assert_eq!(average_degree(&g).unwrap(), Density::new(22, 6));
        let q = FindDenseQuery {
            gamma: 2.0,
            s: VertexSet::singleton(5),
        };
        let out = dichotomy_step(&g, &q, average_degree(&g).unwrap()).unwrap();
        assert_eq!(out.branch, Branch::DropS);
        assert_eq!(out.graph.n(), 5);
    }

    #[test]
    fn contract_branch_keeps_promised_density() {
        // K_6 with a long tail: S = the clique has |N(S)| = 1.
        let mut extra: Vec<(usize, usize)> = (6..30).map(|v| (v - 1, v)).collect();
        extra.push((0, 6));
        extra.retain(|&(u, _)| u != 5);
        let g = families::with_edges(&families::complete(6), 30, &extra);
        let q = FindDenseQuery {
            gamma: 0.5,
            s: (0..6).collect(),
        };
        let out = dichotomy_step(&g, &q, average_degree(&g).unwrap()).unwrap();
        // G - S is a path, far sparser than G.
        assert_eq!(out.branch, Branch::ContractToBall);
        assert_eq!(out.graph.n(), 7);
    }

    #[test]
    fn rejects_non_violating_set() {
        let g = families::complete(5);
        let q = FindDenseQuery {
            gamma: 0.5,
            s: VertexSet::singleton(0),
        };
        assert!(matches!(
            dichotomy_step(&g, &q, average_degree(&g).unwrap()),
            Err(Error::NotViolating { .. })
        ));
    }

    #[test]
    fn clique_is_returned_unchanged() {
        let g = families::complete(40);
        let r = extract_expander(&g, &params(0.1, 0.125, 40), false).unwrap();
        assert_eq!(r.subgraph, g);
        assert_eq!(r.mode, ExtractionMode::PlainExpander);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn small_clique_is_below_floor() {
        let g = families::complete(10);
        let r = extract_expander(&g, &params(0.1, 0.125, 10), false).unwrap();
        assert_eq!(r.subgraph, g);
        assert_eq!(r.mode, ExtractionMode::BelowThreshold);
    }

    #[test]
    fn pendant_path_is_peeled() {
        let mut extra: Vec<(usize, usize)> = (9..27).map(|v| (v, v + 1)).collect();
        extra.push((0, 8));
        extra.push((8, 9));
        let g = families::with_edges(&families::complete(8), 28, &extra);
        let opts = ExtractOptions {
            floor: 3,
            ..ExtractOptions::default()
        };
        let r = extract_expander_with(&g, &params(0.1, 0.125, 28), false, &opts).unwrap();
        assert_eq!(r.map.host_vertices(), &(0..8).collect::<Vec<_>>()[..]);
        assert_eq!(r.trace.len(), 20);
        // The far end goes first, then the path retracts toward the clique.
        assert_eq!(r.trace[0].set, VertexSet::singleton(27));
        assert!(r
            .trace
            .iter()
            .all(|s| s.action == StepAction::MinDegreePeel));
    }

    #[test]
    fn loosely_joined_cliques_contract_to_one() {
        let g = families::with_edges(
            &families::disjoint_union(&families::complete(40), &families::complete(40)),
            80,
            &[(0, 40)],
        );
        let mut p = params(0.3, 0.125, 80);
        p.lambda = Some(0.2);
        let r = extract_expander(&g, &p, false).unwrap();
        assert_eq!(r.mode, ExtractionMode::PlainExpander);
        assert!(r.subgraph.n() <= 41);
        assert!(r
            .trace
            .iter()
            .any(|s| s.action != StepAction::MinDegreePeel));
    }
}
