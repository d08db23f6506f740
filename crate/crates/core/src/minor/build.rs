use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{conflict_prune, MinorModel, NiceSet, StageRecord};
use crate::error::{Error, Result};
use crate::expansion::{floor_pow, DerivedScales, ExpansionParams};
use crate::graph::{bfs_layers, trim_ball, Graph, Path, VertexSet, UNREACHED};
use crate::verify::verify_minor_model;

/// Harvests up to `count` disjoint nice sets of exactly `size` vertices and
/// radius at most `d.k`, avoiding `forbidden`. Each set is a ball around the
/// first vertex of a probe set (the `floor(m^(5/8))` smallest available ids)
/// whose ball reaches `size`, trimmed by dropping the farthest vertices.
/// Stops early, with a warning, when no probe vertex has a large enough ball.
pub fn find_nice_sets(
    h: &Graph,
    count: usize,
    size: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
    forbidden: &VertexSet,
) -> Result<Vec<NiceSet>> {
    let _ = p;
    let m = h.n();
    if size == 0 {
        return Err(Error::InvalidParameter(
            "nice sets need at least one vertex".into(),
        ));
    }
    if count.saturating_mul(size) > m {
        return Err(Error::InvalidParameter(format!(
            "{count} sets of size {size} do not fit in {m} vertices"
        )));
    }
    forbidden.check_range(m)?;
    let probe_size = floor_pow(m, 5.0 / 8.0).max(1);
    let mut blocked = forbidden.to_mask(m);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let probe: Vec<usize> = (0..m).filter(|&v| !blocked[v]).take(probe_size).collect();
        if probe.is_empty() {
            if out.is_empty() {
                return Err(Error::GraphExhausted(
                    "no vertex left for a probe set".into(),
                ));
            }
            break;
        }
        let found = probe.iter().find_map(|&v| {
            let ball = bfs_layers(h, &[v], |w| !blocked[w], d.k, size);
            (ball.order.len() >= size).then(|| (v, trim_ball(&ball, size)))
        });
        let Some((center, members)) = found else {
            log::warn!(
                "nice sets: only {} of {count} found; no probe ball reaches {size} vertices",
                out.len()
            );
            break;
        };
        for &v in &members {
            blocked[v] = true;
        }
        out.push(NiceSet {
            vertices: members.into_iter().collect(),
            center,
            radius_bound: d.k,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorOptions {
    /// Number of nice sets to harvest; default `max(floor(m^(1/4)), 2t)`.
    pub nice_count: Option<usize>,
    /// Size of each nice set; default `floor(m^(1/4))`.
    pub nice_size: Option<usize>,
    pub record_trace: bool,
}

impl Default for MinorOptions {
    fn default() -> Self {
        MinorOptions {
            nice_count: None,
            nice_size: None,
            record_trace: true,
        }
    }
}

/// Construction state between stages.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageState {
    pub alpha: usize,
    /// Surviving nice-set indices, increasing.
    pub index_set: Vec<usize>,
    pub forbidden: VertexSet,
    /// Index chosen at each finished stage.
    pub hubs: Vec<usize>,
    /// `(stage, index) -> path` from the stage's chosen center to the index's center.
    pub stage_paths: BTreeMap<(usize, usize), Path>,
}

/// A `K_t` minor in the expander `h` of at most `4 k t^2` vertices (when the
/// stage cardinality targets are met), built from nice sets joined by short
/// paths over `t - 1` stages.
pub fn build_small_minor(
    h: &Graph,
    t: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
) -> Result<MinorModel> {
    build_small_minor_with(h, t, d, p, &MinorOptions::default())
}

pub fn build_small_minor_with(
    h: &Graph,
    t: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
    opts: &MinorOptions,
) -> Result<MinorModel> {
    let m = h.n();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if t == 1 {
        return Ok(MinorModel::new(1, vec![VertexSet::singleton(0)]));
    }
    let size = opts.nice_size.unwrap_or_else(|| floor_pow(m, 0.25)).max(1);
    let count = opts
        .nice_count
        .unwrap_or_else(|| floor_pow(m, 0.25).max(2 * t))
        .min(m / size);
    if count < t {
        return Err(Error::stalled(
            0,
            format!("room for only {count} nice sets of size {size}"),
        ));
    }
    let sets = find_nice_sets(h, count, size, d, p, &VertexSet::new())?;
    if sets.len() < t {
        return Err(Error::stalled(
            0,
            format!("found {} nice sets of size {size}, need {t}", sets.len()),
        ));
    }

    let set_masks: Vec<Vec<bool>> = sets.iter().map(|s| s.vertices.to_mask(m)).collect();
    // Distances inside each S_i toward its center, for the entry phase.
    let inner: Vec<_> = sets
        .iter()
        .zip(&set_masks)
        .map(|(s, mask)| bfs_layers(h, &[s.center], |w| mask[w], usize::MAX, usize::MAX))
        .collect();

    let ball_target = floor_pow(m, 1.0 - p.eta);
    let mut state = StageState {
        index_set: (0..sets.len()).collect(),
        ..StageState::default()
    };
    let mut forbidden = vec![false; m];
    let mut trace = Vec::new();
    let mut targets_met = true;

    for alpha in 0..t - 1 {
        state.alpha = alpha;
        let needed_after = t - 1 - alpha;
        let target = floor_pow(m, 0.25 - 2.0 * alpha as f64 * p.eta);
        targets_met &= state.index_set.len() >= target;

        // Balls B^k_{H-W}(S_i) and the vertex lying in most of them.
        let mut coverage = vec![0usize; m];
        let mut balls: Vec<Vec<usize>> = Vec::with_capacity(state.index_set.len());
        for &i in &state.index_set {
            let ball = bfs_layers(
                h,
                sets[i].vertices.as_slice(),
                |w| !forbidden[w],
                d.k,
                ball_target,
            );
            for &v in &ball.order {
                coverage[v] += 1;
            }
            balls.push(ball.order);
        }
        let hub = (0..m)
            .filter(|&v| !forbidden[v])
            .max_by_key(|&v| (coverage[v], std::cmp::Reverse(v)))
            .ok_or_else(|| Error::stalled(alpha, "every vertex is forbidden"))?;
        let covering: Vec<usize> = state
            .index_set
            .iter()
            .zip(&balls)
            .filter(|(_, ball)| ball.contains(&hub))
            .map(|(&i, _)| i)
            .collect();
        if covering.len() < needed_after + 1 {
            return Err(Error::stalled(
                alpha,
                format!(
                    "hub {hub} lies in {} balls, need {}; ball sizes {:?}",
                    covering.len(),
                    needed_after + 1,
                    balls.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            ));
        }
        let chosen = covering[0];
        let source = sets[chosen].center;

        // Prefer paths that avoid every other candidate set, so that pruning
        // has little to remove; fall back to paths avoiding only `forbidden`.
        let mut shielded = forbidden.clone();
        for &j in &covering[1..] {
            for v in sets[j].vertices.iter() {
                shielded[v] = true;
            }
        }
        let mut routed_idx = Vec::new();
        let mut routed_paths = Vec::new();
        for &i in &covering[1..] {
            for v in sets[i].vertices.iter() {
                shielded[v] = false;
            }
            let route = route_into(
                h,
                source,
                &shielded,
                &set_masks[i],
                &inner[i].dist,
                &inner[i].parent,
            )
            .filter(|path| path.len() - 1 <= 4 * d.k)
            .or_else(|| {
                route_into(
                    h,
                    source,
                    &forbidden,
                    &set_masks[i],
                    &inner[i].dist,
                    &inner[i].parent,
                )
            });
            for v in sets[i].vertices.iter() {
                shielded[v] = true;
            }
            match route {
                Some(path) if path.len() - 1 <= 4 * d.k => {
                    routed_idx.push(i);
                    routed_paths.push(Path::from_vec_unchecked(path));
                }
                _ => log::debug!("stage {alpha}: no admissible path to set {i}"),
            }
        }
        let bound = routed_paths.iter().map(Path::len).max().unwrap_or(0);
        let routed_sets: Vec<VertexSet> = routed_idx
            .iter()
            .map(|&i| sets[i].vertices.clone())
            .collect();
        let kept = conflict_prune(&routed_sets, &routed_paths, bound)?;
        if kept.len() < needed_after {
            return Err(Error::stalled(
                alpha,
                format!(
                    "{} of {} routed paths survive pruning, need {needed_after}",
                    kept.len(),
                    routed_idx.len()
                ),
            ));
        }

        // Earlier paths into S_chosen now belong to the chosen branch set.
        for s in 0..alpha {
            if let Some(path) = state.stage_paths.get(&(s, chosen)) {
                for &v in path.vertices() {
                    if set_masks[chosen][v] {
                        forbidden[v] = true;
                    }
                }
            }
        }
        let mut next = Vec::with_capacity(kept.len());
        for &k in &kept {
            let i = routed_idx[k];
            let path = routed_paths[k].clone();
            debug_assert!(single_entry(&path, &set_masks[i]));
            for &v in path.vertices() {
                if !set_masks[i][v] {
                    forbidden[v] = true;
                }
            }
            state.stage_paths.insert((alpha, i), path);
            next.push(i);
        }
        state.hubs.push(chosen);
        if opts.record_trace {
            trace.push(StageRecord {
                alpha,
                index_set_size: state.index_set.len(),
                index_set_target: target,
                forbidden_size: state.forbidden.len(),
                hub_vertex: hub,
                hub_coverage: covering.len(),
                chosen_index: chosen,
                routed: routed_idx.len(),
                survivors: next.len(),
                max_path_len: bound,
            });
        }
        state.index_set = next;
        state.forbidden = VertexSet::from_mask(&forbidden);
    }
    state.hubs.push(state.index_set[0]);

    let mut branch_sets = Vec::with_capacity(t);
    for r in 0..t {
        let ir = state.hubs[r];
        let mut members = Vec::new();
        for s in 0..r {
            let path = &state.stage_paths[&(s, ir)];
            members.extend(
                path.vertices()
                    .iter()
                    .copied()
                    .filter(|&v| set_masks[ir][v]),
            );
        }
        for s in r + 1..t {
            let is = state.hubs[s];
            let path = &state.stage_paths[&(r, is)];
            members.extend(
                path.vertices()
                    .iter()
                    .copied()
                    .filter(|&v| !set_masks[is][v]),
            );
        }
        branch_sets.push(members.into_iter().collect::<VertexSet>());
    }
    let mut model = MinorModel::new(t, branch_sets);
    if opts.record_trace {
        model.stage_trace = Some(trace);
    }
    let report = verify_minor_model(h, &model);
    if !report.valid {
        return Err(Error::Internal(format!(
            "constructed minor model failed verification: {:?}",
            report.violations
        )));
    }
    let bound = 4 * d.k.saturating_mul(t * t);
    if targets_met && model.total_vertices > bound {
        return Err(Error::Internal(format!(
            "minor model has {} vertices, above 4 k t^2 = {bound}",
            model.total_vertices
        )));
    }
    Ok(model)
}

/// Whether `path` consists of a prefix outside the set followed by a
/// nonempty suffix inside it.
fn single_entry(path: &Path, mask: &[bool]) -> bool {
    let inside: Vec<bool> = path.vertices().iter().map(|&v| mask[v]).collect();
    let first = inside.iter().position(|&x| x).unwrap_or(inside.len());
    first < inside.len() && inside[first..].iter().all(|&x| x)
}

/// Shortest route from `source` (outside the set) to the set's center that
/// avoids `forbidden`, stays outside the set until it enters, then runs to
/// the center inside the set. `inner_dist`/`inner_parent` describe a BFS
/// from the center inside the set. Ties go to the smaller entry vertex, then
/// the smaller predecessor.
fn route_into(
    h: &Graph,
    source: usize,
    forbidden: &[bool],
    set: &[bool],
    inner_dist: &[usize],
    inner_parent: &[usize],
) -> Option<Vec<usize>> {
    let n = h.n();
    let mut parent = vec![UNREACHED; n];
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut frontier = vec![source];
    let mut depth = 0;
    let mut best: Option<(usize, usize, usize)> = None;
    while !frontier.is_empty() {
        for &y in &frontier {
            for &u in h.neighbors(y) {
                if set[u] && inner_dist[u] != UNREACHED {
                    let cand = (depth + 1 + inner_dist[u], u, y);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        if best.is_some_and(|b| b.0 < depth + 2) {
            break;
        }
        let mut next = Vec::new();
        for &y in &frontier {
            for &w in h.neighbors(y) {
                if !seen[w] && !forbidden[w] && !set[w] {
                    seen[w] = true;
                    parent[w] = y;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
        depth += 1;
    }
    let (_, entry, last_outside) = best?;
    let mut path = vec![last_outside];
    let mut cur = last_outside;
    while cur != source {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    let mut cur = entry;
    path.push(cur);
    while inner_dist[cur] > 0 {
        cur = inner_parent[cur];
        path.push(cur);
    }
    Some(path)
}
