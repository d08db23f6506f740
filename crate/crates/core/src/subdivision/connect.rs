use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{SubdivisionModel, Unit};
use crate::error::{Error, Result};
use crate::expansion::{floor_pow, DerivedScales, ExpansionParams};
use crate::graph::{bfs_layers, shortest_path, trim_ball, Graph, Path, VertexSet, UNREACHED};
use crate::minor::conflict_prune;
use crate::verify::verify_subdivision;

/// A proper edge colouring of `K_t` with colours `1..=t` and an injector:
/// no two edges share both colour and injector value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub t: usize,
    /// `(i, j)` with `i < j` (0-based corners) to its colour.
    pub color: BTreeMap<(usize, usize), usize>,
    /// `(i, j)` to its position among the edges of its colour, from 1.
    pub injector: BTreeMap<(usize, usize), usize>,
}

/// Round-robin colouring: with `t` padded to an even `N`, round `r` pairs
/// `r` with the fixed vertex `N - 1` and `r + s` with `r - s` (mod `N - 1`).
/// Edges touching the padding vertex are dropped.
pub fn kt_edge_coloring(t: usize) -> EdgeColoring {
    let mut color = BTreeMap::new();
    let mut injector = BTreeMap::new();
    if t >= 2 {
        let n = t + t % 2;
        let rounds = n - 1;
        for r in 0..rounds {
            let mut pairs = vec![(r, n - 1)];
            for s in 1..n / 2 {
                pairs.push(((r + s) % rounds, (r + rounds - s) % rounds));
            }
            let mut next = 1;
            for (a, b) in pairs {
                let (i, j) = (a.min(b), a.max(b));
                if j < t {
                    color.insert((i, j), r + 1);
                    injector.insert((i, j), next);
                    next += 1;
                }
            }
        }
    }
    EdgeColoring { t, color, injector }
}

impl EdgeColoring {
    /// Whether the colouring is proper, uses colours in `1..=t`, and the
    /// pair (colour, injector) is injective with values in `1..=t`.
    pub fn is_valid(&self) -> bool {
        let t = self.t;
        if self.color.len() != t * t.saturating_sub(1) / 2 {
            return false;
        }
        let mut at: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (&(i, j), &c) in &self.color {
            let Some(&e) = self.injector.get(&(i, j)) else {
                return false;
            };
            if i >= j || j >= t || !(1..=t).contains(&c) || !(1..=t).contains(&e) {
                return false;
            }
            if !at.insert((i, c)) || !at.insert((j, c)) || !pairs.insert((c, e)) {
                return false;
            }
        }
        true
    }
}

/// Paths built while joining units: `q[(alpha, beta, i)]` runs from the
/// center of set `alpha` of unit `i` to hub `(alpha, beta)`. Indices are
/// 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexConnectState {
    pub live: Vec<usize>,
    pub hubs: BTreeMap<(usize, usize), usize>,
    pub q: BTreeMap<(usize, usize, usize), Path>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct ConnectOptions {
    /// Walk every `(alpha, beta)` step rather than only those the colouring uses.
    pub all_steps: bool,
}

/// Joins `t` of the given units into a `K_t` subdivision whose corners are
/// unit corners. Hub steps `(alpha, beta)` run in lexicographic order; in
/// each, every live unit routes set `alpha` to a common hub avoiding all
/// earlier paths and its own later sets, and a conflict-free subfamily is
/// kept. Corner `i` meets corner `j` through spoke `c(ij)` of each and the
/// two paths into hub `(c(ij), e(ij))`.
pub fn connect_units(
    h: &Graph,
    units: &[Unit],
    t: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
) -> Result<SubdivisionModel> {
    connect_units_with(h, units, t, d, p, &ConnectOptions::default()).map(|(m, _)| m)
}

pub fn connect_units_with(
    h: &Graph,
    units: &[Unit],
    t: usize,
    d: &DerivedScales,
    p: &ExpansionParams,
    opts: &ConnectOptions,
) -> Result<(SubdivisionModel, LexConnectState)> {
    let m = h.n();
    if t < 2 {
        return Err(Error::InvalidParameter("joining units needs t >= 2".into()));
    }
    if units.len() < t {
        return Err(Error::InvalidParameter(format!(
            "{} units given, need at least t = {t}",
            units.len()
        )));
    }
    if let Some(u) = units.iter().find(|u| u.t() != t || u.sets.len() != t) {
        return Err(Error::InvalidParameter(format!(
            "unit at corner {} has {} spokes, expected {t}",
            u.corner,
            u.t()
        )));
    }
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; m];
    let mut spoke_mask = vec![false; m];
    for (i, u) in units.iter().enumerate() {
        for v in u.vertices() {
            if v >= m {
                return Err(Error::VertexOutOfRange { vertex: v, n: m });
            }
            if spoke_mask[v] || owner[v].is_some() {
                return Err(Error::Overlap(v));
            }
        }
        for (a, s) in u.sets.iter().enumerate() {
            for v in s.vertices.iter() {
                owner[v] = Some((i, a));
            }
        }
        for sp in &u.spokes {
            for &v in sp.vertices() {
                if owner[v].is_none() {
                    spoke_mask[v] = true;
                }
            }
        }
    }
    // Set alpha of every unit shrinks to floor(m^(sigma - alpha eta)).
    let sets: Vec<Vec<VertexSet>> = units
        .iter()
        .map(|u| {
            u.sets
                .iter()
                .enumerate()
                .map(|(a, s)| {
                    let size = floor_pow(m, u.sigma - a as f64 * p.eta).max(1);
                    let mask = s.vertices.to_mask(m);
                    let ball = bfs_layers(h, &[s.center], |v| mask[v], usize::MAX, usize::MAX);
                    trim_ball(&ball, size).into_iter().collect()
                })
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; m];
    for (i, unit_sets) in sets.iter().enumerate() {
        for (a, s) in unit_sets.iter().enumerate() {
            for v in s.iter() {
                owner[v] = Some((i, a));
            }
        }
    }

    let coloring = kt_edge_coloring(t);
    let steps: Vec<(usize, usize)> = if opts.all_steps {
        (0..t).flat_map(|a| (0..t).map(move |b| (a, b))).collect()
    } else {
        let used: BTreeSet<(usize, usize)> = coloring
            .color
            .iter()
            .map(|(e, &c)| (c - 1, coloring.injector[e] - 1))
            .collect();
        used.into_iter().collect()
    };
    let ball_target = d.large_set_limit(p);
    let mut state = LexConnectState {
        live: (0..units.len()).collect(),
        ..LexConnectState::default()
    };
    for (step, &(alpha, beta)) in steps.iter().enumerate() {
        // W: every spoke of a live unit and every path built so far.
        let mut w = vec![false; m];
        for &i in &state.live {
            for sp in &units[i].spokes {
                for &v in sp.vertices() {
                    w[v] = true;
                }
            }
        }
        for (&(_, _, i), q) in &state.q {
            if state.live.contains(&i) {
                for &v in q.vertices() {
                    w[v] = true;
                }
            }
        }
        let live_set = |v: usize| owner[v].is_some_and(|(j, _)| state.live.contains(&j));
        // W_i = (W - S_{i,alpha}) + later sets of unit i.
        let open_for = |i: usize, v: usize| match owner[v] {
            Some((j, a)) if j == i && a == alpha => true,
            Some((j, a)) if j == i && a > alpha => false,
            _ => !w[v],
        };
        let mut coverage = vec![0usize; m];
        let mut dists = Vec::with_capacity(state.live.len());
        for &i in &state.live {
            let ball = bfs_layers(
                h,
                sets[i][alpha].as_slice(),
                |v| open_for(i, v),
                d.k,
                ball_target,
            );
            for &v in &ball.order {
                coverage[v] += 1;
            }
            dists.push(ball.dist);
        }
        let hub = (0..m)
            .filter(|&v| !w[v] && !live_set(v) && coverage[v] > 0)
            .max_by_key(|&v| (coverage[v], std::cmp::Reverse(v)))
            .ok_or_else(|| Error::stalled(step, "no hub is reachable"))?;
        let covering: Vec<usize> = state
            .live
            .iter()
            .zip(&dists)
            .filter(|(_, dist)| dist[hub] != UNREACHED)
            .map(|(&i, _)| i)
            .collect();
        if covering.len() < t {
            return Err(Error::stalled(
                step,
                format!("hub {hub} reaches {} units, need {t}", covering.len()),
            ));
        }
        // The prune sets: sets alpha.. of each unit.
        let prune_set =
            |i: usize| -> VertexSet { sets[i][alpha..].iter().flat_map(|s| s.iter()).collect() };
        let mut routed_idx = Vec::new();
        let mut routed = Vec::new();
        for &i in &covering {
            let start = units[i].sets[alpha].center;
            let shielded = |v: usize| {
                open_for(i, v)
                    && owner[v].is_none_or(|(j, a)| j == i || !state.live.contains(&j) || a < alpha)
            };
            let route = shortest_path(h, start, hub, shielded)
                .filter(|q| q.len() - 1 <= 2 * d.k)
                .or_else(|| shortest_path(h, start, hub, |v| open_for(i, v)));
            match route {
                Some(q) if q.len() - 1 <= 2 * d.k => {
                    routed_idx.push(i);
                    routed.push(Path::from_vec_unchecked(q));
                }
                _ => log::debug!("step ({alpha},{beta}): unit {i} has no short path to hub {hub}"),
            }
        }
        let bound = routed.iter().map(Path::len).max().unwrap_or(0);
        let prune_sets: Vec<VertexSet> = routed_idx.iter().map(|&i| prune_set(i)).collect();
        let kept = conflict_prune(&prune_sets, &routed, bound)?;
        if kept.len() < t {
            return Err(Error::stalled(
                step,
                format!(
                    "{} of {} units survive step ({alpha},{beta}), need {t}",
                    kept.len(),
                    routed.len()
                ),
            ));
        }
        let live: Vec<usize> = kept.iter().map(|&k| routed_idx[k]).collect();
        for &k in &kept {
            let i = routed_idx[k];
            check_insertion(
                units,
                &sets,
                &state,
                &live,
                (alpha, beta, i),
                &routed[k],
                hub,
                d,
            )?;
        }
        state.live = live;
        state.q.retain(|&(_, _, i), _| state.live.contains(&i));
        for &k in &kept {
            state
                .q
                .insert((alpha, beta, routed_idx[k]), routed[k].clone());
        }
        state.hubs.insert((alpha, beta), hub);
    }

    let chosen: Vec<usize> = state.live[..t].to_vec();
    let corners: Vec<usize> = chosen.iter().map(|&i| units[i].corner).collect();
    let mut edge_paths = BTreeMap::new();
    for (&(a, b), &c) in &coloring.color {
        let e = coloring.injector[&(a, b)];
        let (ui, uj) = (chosen[a], chosen[b]);
        let mut union = vec![false; m];
        let pieces = [
            &units[ui].spokes[c - 1],
            &state.q[&(c - 1, e - 1, ui)],
            &state.q[&(c - 1, e - 1, uj)],
            &units[uj].spokes[c - 1],
        ];
        for piece in pieces {
            for &v in piece.vertices() {
                union[v] = true;
            }
        }
        let r = shortest_path(h, corners[a], corners[b], |v| union[v]).ok_or_else(|| {
            Error::Internal(format!("pieces for corners {a} and {b} do not join"))
        })?;
        edge_paths.insert((a, b), Path::from_vec_unchecked(r));
    }
    let model = SubdivisionModel::new(corners, edge_paths);
    let report = verify_subdivision(h, &model);
    if !report.valid {
        return Err(Error::Internal(format!(
            "joined units failed verification: {:?}",
            report.violations
        )));
    }
    Ok((model, state))
}

/// Checks a new path `q = Q_{alpha,beta,i}` against the conditions the
/// final assembly relies on.
#[allow(clippy::too_many_arguments)]
fn check_insertion(
    units: &[Unit],
    sets: &[Vec<VertexSet>],
    state: &LexConnectState,
    live: &[usize],
    (alpha, beta, i): (usize, usize, usize),
    q: &Path,
    hub: usize,
    d: &DerivedScales,
) -> Result<()> {
    let fail = |what: String| {
        Err(Error::Internal(format!(
            "path ({alpha},{beta},{i}): {what}"
        )))
    };
    if q.first() != units[i].sets[alpha].center || q.last() != hub {
        return fail("wrong endpoints".into());
    }
    if q.len() > 2 * d.k {
        return fail(format!("length {} above 2k", q.len()));
    }
    let own_set = &sets[i][alpha];
    for (&(a, b, j), other) in &state.q {
        if !live.contains(&j) {
            continue;
        }
        let may_share = a == alpha && (b == beta || i == j);
        if !may_share {
            if let Some(v) = q
                .vertices()
                .iter()
                .find(|&&v| other.contains(v) && !(i == j && own_set.contains(v)))
            {
                return fail(format!("meets path ({a},{b},{j}) at {v}"));
            }
        }
    }
    for &j in live {
        for (a, sp) in units[j].spokes.iter().enumerate() {
            let shared_ok = |v: usize| j == i && a == alpha && own_set.contains(v);
            if let Some(&v) = q
                .vertices()
                .iter()
                .find(|&&v| sp.contains(v) && !shared_ok(v))
            {
                return fail(format!("meets spoke {a} of unit {j} at {v}"));
            }
        }
        for (a, s) in sets[j].iter().enumerate() {
            let forbidden = a > alpha || (a == alpha && j != i);
            if forbidden {
                if let Some(&v) = q.vertices().iter().find(|&&v| s.contains(v)) {
                    return fail(format!("meets set {a} of unit {j} at {v}"));
                }
            }
        }
    }
    Ok(())
}
