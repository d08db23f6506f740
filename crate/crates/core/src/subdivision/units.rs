use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{high_degree_threshold, Star, SubdivisionModel, Unit};
use crate::error::{Error, Result};
use crate::expansion::{floor_pow, DerivedScales, ExpansionParams};
use crate::graph::{bfs_layers, shortest_path, trim_ball, Graph, Path, VertexSet, UNREACHED};
use crate::minor::{conflict_prune, NiceSet};
use crate::verify::{verify_subdivision, verify_unit};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitOptions {
    /// Units to build; `None` means `2t + 1`.
    pub unit_target: Option<usize>,
    /// Candidate sets per unit attempt; `None` means `max(floor(m^(1/4)), 8t)`.
    pub candidate_count: Option<usize>,
    /// Largest ball kept as a candidate set on the sparse route; `None`
    /// means `max(floor(m^sigma), ceil(log^2 m))`.
    pub ball_cap: Option<usize>,
    /// Failed attempts tolerated before giving up on further units.
    pub max_failures: usize,
}

impl Default for UnitOptions {
    fn default() -> Self {
        UnitOptions {
            unit_target: None,
            candidate_count: None,
            ball_cap: None,
            max_failures: 3,
        }
    }
}

impl UnitOptions {
    pub fn target(&self, t: usize) -> usize {
        self.unit_target.unwrap_or(2 * t + 1)
    }

    fn candidates(&self, m: usize, t: usize) -> usize {
        self.candidate_count
            .unwrap_or_else(|| floor_pow(m, 0.25).max(8 * t))
    }
}

/// What the sparse route produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparseOutcome {
    Units(Vec<Unit>),
    /// `t` exits into the avoided set were found first; their endpoints are
    /// the corners of a subdivision.
    Subdivision(SubdivisionModel),
}

/// Disjoint candidate sets with centers and an owner lookup.
struct Candidates {
    centers: Vec<usize>,
    sets: Vec<VertexSet>,
    owner: Vec<usize>,
}

impl Candidates {
    fn new(m: usize) -> Self {
        Candidates {
            centers: Vec::new(),
            sets: Vec::new(),
            owner: vec![NONE; m],
        }
    }

    fn push(&mut self, center: usize, set: VertexSet) {
        let idx = self.sets.len();
        for v in set.iter() {
            debug_assert_eq!(self.owner[v], NONE);
            self.owner[v] = idx;
        }
        self.centers.push(center);
        self.sets.push(set);
    }

    fn len(&self) -> usize {
        self.sets.len()
    }
}

/// Vertices on the paths of `live` indices, centers excluded.
fn path_mask(m: usize, cand: &Candidates, live: &[usize], paths: &[Vec<Path>]) -> Vec<bool> {
    let mut used = vec![false; m];
    for &i in live {
        for p in &paths[i] {
            for &v in p.vertices() {
                used[v] = true;
            }
        }
    }
    for &i in live {
        used[cand.centers[i]] = false;
    }
    used
}

/// One hub round: grows a ball from each seed set avoiding `w` and `used`,
/// picks the vertex (outside every live candidate set) lying in most balls,
/// routes a shortest path from each covering center to it and keeps a
/// conflict-free subfamily. Returns the kept indices with their paths.
#[allow(clippy::too_many_arguments)]
fn hub_round(
    h: &Graph,
    w: &[bool],
    used: &[bool],
    cand: &Candidates,
    live: &[usize],
    seeds: &[Vec<usize>],
    radius: usize,
    ball_target: usize,
    len_bound: usize,
    need: usize,
    stage: usize,
) -> Result<(usize, Vec<(usize, Path)>)> {
    let m = h.n();
    let open = |v: usize| !w[v] && !used[v];
    let mut coverage = vec![0usize; m];
    let mut balls = Vec::with_capacity(live.len());
    for seed in seeds {
        let ball = bfs_layers(h, seed, open, radius, ball_target);
        for &v in &ball.order {
            coverage[v] += 1;
        }
        balls.push(ball.dist);
    }
    let live_owner = |v: usize| cand.owner[v] != NONE && live.contains(&cand.owner[v]);
    let hub = (0..m)
        .filter(|&v| open(v) && coverage[v] > 0 && !live_owner(v))
        .max_by_key(|&v| (coverage[v], std::cmp::Reverse(v)))
        .ok_or_else(|| Error::stalled(stage, "no vertex is reachable from any candidate"))?;
    let covering: Vec<usize> = live
        .iter()
        .zip(&balls)
        .filter(|(_, dist)| dist[hub] != UNREACHED)
        .map(|(&i, _)| i)
        .collect();
    if covering.len() < need {
        return Err(Error::stalled(
            stage,
            format!(
                "hub {hub} is reached from {} candidates, need {need}",
                covering.len()
            ),
        ));
    }
    let mut shield = vec![false; m];
    for &j in &covering {
        for v in cand.sets[j].iter() {
            shield[v] = true;
        }
    }
    let mut routed_idx = Vec::new();
    let mut routed = Vec::new();
    for &i in &covering {
        let own = |v: usize| cand.owner[v] == i;
        let route = shortest_path(h, cand.centers[i], hub, |v| {
            open(v) && (!shield[v] || own(v))
        })
        .filter(|p| p.len() - 1 <= len_bound)
        .or_else(|| shortest_path(h, cand.centers[i], hub, open));
        match route {
            Some(p) if p.len() - 1 <= len_bound => {
                routed_idx.push(i);
                routed.push(Path::from_vec_unchecked(p));
            }
            _ => log::debug!("stage {stage}: candidate {i} has no admissible path to hub {hub}"),
        }
    }
    let bound = routed.iter().map(Path::len).max().unwrap_or(0);
    let sets: Vec<VertexSet> = routed_idx.iter().map(|&i| cand.sets[i].clone()).collect();
    let kept = conflict_prune(&sets, &routed, bound)?;
    if kept.len() < need {
        return Err(Error::stalled(
            stage,
            format!(
                "{} of {} paths to hub {hub} survive pruning, need {need}",
                kept.len(),
                routed.len()
            ),
        ));
    }
    Ok((
        hub,
        kept.into_iter()
            .map(|k| (routed_idx[k], routed[k].clone()))
            .collect(),
    ))
}

/// Builds a unit from `t` hub rounds over `order` (`t + 1` indices, the last
/// being the corner): spoke `s` is a shortest corner-to-center path through
/// the two paths into hub `s`, and each set is trimmed to `floor(m^sigma)`.
fn assemble_unit(
    h: &Graph,
    cand: &Candidates,
    order: &[usize],
    paths: &[Vec<Path>],
    d: &DerivedScales,
    sigma: f64,
) -> Result<Unit> {
    let m = h.n();
    let t = order.len() - 1;
    let corner_idx = order[t];
    let corner = cand.centers[corner_idx];
    let size = floor_pow(m, sigma).max(1);
    let mut spokes = Vec::with_capacity(t);
    let mut sets = Vec::with_capacity(t);
    for (s, &i) in order[..t].iter().enumerate() {
        let mut union = vec![false; m];
        for &v in paths[corner_idx][s]
            .vertices()
            .iter()
            .chain(paths[i][s].vertices())
        {
            union[v] = true;
        }
        let spoke = shortest_path(h, corner, cand.centers[i], |v| union[v]).ok_or_else(|| {
            Error::Internal(format!("paths into hub {s} do not join corner and center"))
        })?;
        spokes.push(Path::from_vec_unchecked(spoke));
        let mask = cand.sets[i].to_mask(m);
        let ball = bfs_layers(h, &[cand.centers[i]], |v| mask[v], usize::MAX, usize::MAX);
        if ball.order.len() < size {
            return Err(Error::Internal(format!(
                "candidate set {i} has fewer than {size} vertices"
            )));
        }
        sets.push(NiceSet {
            vertices: trim_ball(&ball, size).into_iter().collect(),
            center: cand.centers[i],
            radius_bound: d.k,
        });
    }
    let unit = Unit {
        corner,
        spokes,
        sets,
        sigma,
    };
    let report = verify_unit(h, &unit, d);
    if !report.valid {
        return Err(Error::Internal(format!(
            "assembled unit failed verification: {:?}",
            report.violations
        )));
    }
    Ok(unit)
}

/// Builds disjoint units around the centers of disjoint high-degree stars,
/// one at a time, each avoiding `forbidden` and the earlier units. Every
/// unit takes `t` hub rounds; the growth for a candidate starts from the
/// part of its star not yet used. Returns the units built, possibly fewer
/// than the target; fails with the stall if none could be built.
pub fn build_units_dense(
    h: &Graph,
    stars: &[Star],
    forbidden: &VertexSet,
    d: &DerivedScales,
    p: &ExpansionParams,
    opts: &UnitOptions,
) -> Result<Vec<Unit>> {
    let m = h.n();
    let t = p.t;
    forbidden.check_range(m)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let size = floor_pow(m, p.sigma).max(1);
    let ball_target = d.large_set_limit(p);
    let per_attempt = opts.candidates(m, t);
    let mut w = forbidden.to_mask(m);
    let mut units: Vec<Unit> = Vec::new();
    let mut failures = 0;
    let mut last_error = None;
    let mut star_owner = vec![NONE; m];
    for (j, star) in stars.iter().enumerate() {
        for v in star.members.iter() {
            star_owner[v] = j;
        }
    }
    let mut attempts = 0;
    while units.len() < opts.target(t) && failures < opts.max_failures {
        // Stars stay usable after a unit cuts through them: only the center
        // and the set must be unused. Each attempt starts further along.
        let mut cand = Candidates::new(m);
        let mut star_of = Vec::new();
        let mut taken = w.clone();
        let offset = (attempts * per_attempt) % stars.len().max(1);
        attempts += 1;
        for j in (0..stars.len()).map(|j| (j + offset) % stars.len()) {
            if cand.len() >= per_attempt {
                break;
            }
            let star = &stars[j];
            // A used center hands over to the first free member of its star.
            let center = if taken[star.center] {
                match star.members.iter().find(|&v| !taken[v]) {
                    Some(v) => v,
                    None => continue,
                }
            } else {
                star.center
            };
            let ball = bfs_layers(
                h,
                &[center],
                |v| !taken[v] && (star_owner[v] == NONE || star_owner[v] == j),
                d.k,
                size,
            );
            if ball.order.len() < size {
                continue;
            }
            let set: VertexSet = trim_ball(&ball, size).into_iter().collect();
            for v in set.iter() {
                taken[v] = true;
            }
            cand.push(center, set);
            star_of.push(star.members.clone());
        }
        if cand.len() < t + 1 {
            log::debug!("dense units: only {} unused stars left", cand.len());
            break;
        }
        let mut live: Vec<usize> = (0..cand.len()).collect();
        let mut paths: Vec<Vec<Path>> = vec![Vec::new(); cand.len()];
        let mut attempt = Ok(());
        for alpha in 0..t {
            let used = path_mask(m, &cand, &live, &paths);
            let seeds: Vec<Vec<usize>> = live
                .iter()
                .map(|&i| {
                    let mut s: Vec<usize> =
                        star_of[i].iter().filter(|&v| !w[v] && !used[v]).collect();
                    if !s.contains(&cand.centers[i]) {
                        s.push(cand.centers[i]);
                    }
                    s
                })
                .collect();
            match hub_round(
                h,
                &w,
                &used,
                &cand,
                &live,
                &seeds,
                2 * d.k + 1,
                ball_target,
                2 * d.k + 2,
                t + 1,
                alpha,
            ) {
                Ok((_, kept)) => {
                    live = kept.iter().map(|(i, _)| *i).collect();
                    for (i, path) in kept {
                        paths[i].push(path);
                    }
                }
                Err(e) => {
                    attempt = Err(e);
                    break;
                }
            }
        }
        if let Err(e) = attempt {
            log::debug!("dense unit attempt failed: {e}");
            failures += 1;
            last_error = Some(e);
            continue;
        }
        let unit = assemble_unit(h, &cand, &live[..t + 1], &paths, d, p.sigma)?;
        for v in unit.vertices() {
            w[v] = true;
        }
        units.push(unit);
    }
    match last_error {
        Some(e) if units.is_empty() => Err(e),
        _ => Ok(units),
    }
}

/// Exit from a candidate center into the avoided set.
struct Exit {
    end: usize,
    path: Path,
}

/// Shortest path of length at most `radius` from `v` through vertices
/// outside `w` and `used` to a vertex of `w` not in `corners`; ties go to
/// the smaller endpoint.
fn find_exit(
    h: &Graph,
    v: usize,
    radius: usize,
    w: &[bool],
    used: &[bool],
    corners: &[usize],
) -> Option<Exit> {
    if radius == 0 {
        return None;
    }
    let ball = bfs_layers(h, &[v], |x| !w[x] && !used[x], radius - 1, usize::MAX);
    let mut best: Option<(usize, usize, usize)> = None;
    for &y in &ball.order {
        for &b in h.neighbors(y) {
            if w[b] && !corners.contains(&b) {
                let cand = (ball.dist[y] + 1, b, y);
                if best.is_none_or(|x| cand < x) {
                    best = Some(cand);
                }
            }
        }
    }
    let (_, end, y) = best?;
    let mut path = ball.path_to(y);
    path.push(end);
    Some(Exit {
        end,
        path: Path::from_vec_unchecked(path),
    })
}

/// Candidate sets for the sparse route: balls `B^r_{H-W}(v)` in increasing
/// id order of `v`, with `r <= l` the largest radius keeping the ball within
/// `cap`, disjoint from each other. Returns the sets and their radii.
fn sparse_candidates(
    h: &Graph,
    w: &[bool],
    count: usize,
    cap: usize,
    min_size: usize,
    l: usize,
) -> (Candidates, Vec<usize>) {
    let m = h.n();
    let mut cand = Candidates::new(m);
    let mut radii = Vec::new();
    let mut taken = vec![false; m];
    for v in 0..m {
        if cand.len() >= count {
            break;
        }
        if w[v] || taken[v] {
            continue;
        }
        let full = bfs_layers(h, &[v], |x| !w[x], l, cap + 1);
        let r = if full.order.len() > cap {
            full.radius.saturating_sub(1)
        } else {
            full.radius
        };
        let ball: Vec<usize> = full
            .order
            .iter()
            .copied()
            .filter(|&x| full.dist[x] <= r)
            .collect();
        if ball.len() < min_size || ball.iter().any(|&x| taken[x]) {
            continue;
        }
        for &x in &ball {
            taken[x] = true;
        }
        cand.push(v, ball.into_iter().collect());
        radii.push(r);
    }
    (cand, radii)
}

/// Builds units in an expander whose high-degree part `x` has been set
/// aside. Candidate sets are small balls around low-degree vertices; each
/// round either routes every live candidate to a common new hub or, when at
/// least half of them see a short exit into the avoided set, sends them all
/// to the most popular exit vertex. `t` hub rounds give a unit; `t` exit
/// rounds give a subdivision directly, with exit vertices as corners.
pub fn build_units_sparse(
    h: &Graph,
    x: &VertexSet,
    d: &DerivedScales,
    p: &ExpansionParams,
    degree_floor: f64,
    opts: &UnitOptions,
) -> Result<SparseOutcome> {
    let m = h.n();
    let t = p.t;
    x.check_range(m)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if (h.min_degree() as f64) < degree_floor {
        return Err(Error::Precondition(format!(
            "minimum degree {} is below the floor {degree_floor}",
            h.min_degree()
        )));
    }
    let log2 = high_degree_threshold(m);
    let log2_real = (m.max(2) as f64).ln().powi(2);
    let xm = x.to_mask(m);
    if let Some(v) = (0..m)
        .find(|&v| !xm[v] && h.neighbors(v).iter().filter(|&&u| !xm[u]).count() as f64 > log2_real)
    {
        return Err(Error::Precondition(format!(
            "vertex {v} has degree above log^2 m outside the set aside"
        )));
    }
    let size = floor_pow(m, p.sigma).max(1);
    let cap = opts.ball_cap.unwrap_or(size.max(log2));
    let pairs = (t * (t - 1) / 2).max(1);
    let floor_need = pairs.min(t + 1);
    let mut w = xm;
    let mut units: Vec<Unit> = Vec::new();
    let mut failures = 0;
    let mut last_error = None;
    let mut count = opts.candidates(m, t);
    while units.len() < opts.target(t) && failures < opts.max_failures {
        let (cand, radii) = sparse_candidates(h, &w, count, cap, size, d.l);
        if cand.len() < floor_need {
            log::debug!("sparse units: only {} candidate balls left", cand.len());
            break;
        }
        // Exit rounds thin the candidates fast; if they lead to a stall,
        // the attempt is rerun with hub rounds only.
        let outcome =
            sparse_attempt(h, &w, &cand, &radii, d, p, true, floor_need).or_else(|e| match e {
                Error::Stalled { .. } => {
                    sparse_attempt(h, &w, &cand, &radii, d, p, false, floor_need)
                }
                e => Err(e),
            });
        match outcome {
            Ok(SparseOutcome::Subdivision(model)) => return Ok(SparseOutcome::Subdivision(model)),
            Ok(SparseOutcome::Units(built)) => {
                for unit in built {
                    for v in unit.vertices() {
                        w[v] = true;
                    }
                    units.push(unit);
                }
            }
            Err(e @ Error::Stalled { .. }) => {
                log::debug!("sparse unit attempt failed: {e}");
                failures += 1;
                last_error = Some(e);
                count = (2 * count).min(m);
            }
            Err(e) => return Err(e),
        }
    }
    match last_error {
        Some(e) if units.is_empty() => Err(e),
        _ => Ok(SparseOutcome::Units(units)),
    }
}

/// One unit attempt on the sparse route over the candidates `cand`.
/// Produces a single unit or, through `t` exit rounds, a subdivision.
#[allow(clippy::too_many_arguments)]
fn sparse_attempt(
    h: &Graph,
    w: &[bool],
    cand: &Candidates,
    radii: &[usize],
    d: &DerivedScales,
    p: &ExpansionParams,
    allow_exits: bool,
    floor_need: usize,
) -> Result<SparseOutcome> {
    let m = h.n();
    let t = p.t;
    let log2 = high_degree_threshold(m);
    let ball_target = d.large_set_limit(p);
    let mut live: Vec<usize> = (0..cand.len()).collect();
    let mut p_paths: Vec<Vec<Path>> = vec![Vec::new(); cand.len()];
    let mut q_paths: Vec<Vec<Path>> = vec![Vec::new(); cand.len()];
    let mut corners: Vec<usize> = Vec::new();
    let (mut alpha, mut beta) = (0, 0);
    let mut failed = None;
    while alpha < t && beta < t {
        let stage = alpha + beta;
        let all: Vec<Vec<Path>> = (0..cand.len())
            .map(|i| p_paths[i].iter().chain(&q_paths[i]).cloned().collect())
            .collect();
        let used = path_mask(m, cand, &live, &all);
        let mut exits: BTreeMap<usize, Exit> = BTreeMap::new();
        for &i in &live {
            if let Some(e) = find_exit(h, cand.centers[i], radii[i], w, &used, &corners) {
                exits.insert(i, e);
            }
        }
        if allow_exits && 2 * exits.len() >= live.len() {
            let mut by_end: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (&i, e) in &exits {
                by_end.entry(e.end).or_default().push(i);
            }
            let (&end, group) = by_end
                .iter()
                .max_by_key(|(&b, g)| (g.len(), std::cmp::Reverse(b)))
                .expect("nonempty exits");
            if group.len() >= floor_need || exits.len() == live.len() {
                if group.len() < floor_need {
                    failed = Some(Error::stalled(
                        stage,
                        format!("exit {end} is shared by {} candidates", group.len()),
                    ));
                    break;
                }
                live = group.clone();
                for &i in &live {
                    q_paths[i].push(exits[&i].path.clone());
                }
                corners.push(end);
                beta += 1;
                continue;
            }
        }
        let need = if alpha + 1 == t { t + 1 } else { floor_need };
        // Candidates without an exit are the ones whose balls are known
        // to grow; when too few remain, route every live candidate.
        let mut inner: Vec<usize> = live
            .iter()
            .copied()
            .filter(|i| !exits.contains_key(i))
            .collect();
        if inner.len() < need {
            inner = live.clone();
        }
        let used = path_mask(m, cand, &inner, &all);
        let seeds: Vec<Vec<usize>> = inner
            .iter()
            .map(|&i| {
                let v = cand.centers[i];
                let ball = bfs_layers(h, &[v], |y| !w[y] && !used[y], radii[i], log2);
                trim_ball(&ball, log2)
            })
            .collect();
        match hub_round(
            h,
            w,
            &used,
            cand,
            &inner,
            &seeds,
            2 * d.k,
            ball_target,
            3 * d.k,
            need,
            stage,
        ) {
            Ok((_, kept)) => {
                live = kept.iter().map(|(i, _)| *i).collect();
                for (i, path) in kept {
                    p_paths[i].push(path);
                }
                alpha += 1;
            }
            Err(e) => {
                failed = Some(e);
                break;
            }
        }
    }
    if let Some(e) = failed {
        return Err(e);
    }
    if beta == t {
        if t < 2 {
            return Ok(SparseOutcome::Subdivision(SubdivisionModel::new(
                corners,
                BTreeMap::new(),
            )));
        }
        let mut edge_paths = BTreeMap::new();
        let mut next = live.iter();
        for i in 0..t {
            for j in i + 1..t {
                let c = *next.next().expect("enough live candidates");
                let mut union = vec![false; m];
                for &v in q_paths[c][i]
                    .vertices()
                    .iter()
                    .chain(q_paths[c][j].vertices())
                {
                    union[v] = true;
                }
                let r =
                    shortest_path(h, corners[i], corners[j], |v| union[v]).ok_or_else(|| {
                        Error::Internal(format!("exits of candidate {c} do not join"))
                    })?;
                edge_paths.insert((i, j), Path::from_vec_unchecked(r));
            }
        }
        let model = SubdivisionModel::new(corners, edge_paths);
        let report = verify_subdivision(h, &model);
        if !report.valid {
            return Err(Error::Internal(format!(
                "exit subdivision failed verification: {:?}",
                report.violations
            )));
        }
        return Ok(SparseOutcome::Subdivision(model));
    }
    // Exit paths are not part of a unit; drop them before assembling.
    let unit = assemble_unit(h, cand, &live[..t + 1], &p_paths, d, p.sigma)?;
    Ok(SparseOutcome::Units(vec![unit]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::subdivision::{split_by_degree_with, DegreeSplit};

    fn scales(m: usize, t: usize) -> (DerivedScales, ExpansionParams) {
        let p = ExpansionParams::for_subdivision(t, 0.1, m).unwrap();
        (DerivedScales::new(m, &p).unwrap(), p)
    }

    #[test]
    fn dense_units_in_a_clique() {
        let g = families::complete(120);
        let (d, p) = scales(120, 3);
        let DegreeSplit::Stars(stars) = split_by_degree_with(&g, p.sigma, Some(5)) else {
            panic!("K_120 has high-degree stars");
        };
        let opts = UnitOptions {
            unit_target: Some(1),
            ..UnitOptions::default()
        };
        let units = build_units_dense(&g, &stars, &VertexSet::new(), &d, &p, &opts).unwrap();
        assert_eq!(units.len(), 1);
        assert_eq!(units[0].t(), 3);
        assert!(verify_unit(&g, &units[0], &d).valid);
    }

    #[test]
    fn sparse_units_in_a_torus() {
        let g = families::grid_torus(20);
        let (d, p) = scales(400, 2);
        let one = UnitOptions {
            unit_target: Some(1),
            ..UnitOptions::default()
        };
        match build_units_sparse(&g, &VertexSet::new(), &d, &p, 0.0, &one).unwrap() {
            SparseOutcome::Units(units) => {
                assert_eq!(units.len(), 1);
                assert!(verify_unit(&g, &units[0], &d).valid);
            }
            other => panic!("{other:?}"),
        }
        // Later attempts may exit into earlier units instead.
        let many = UnitOptions {
            unit_target: Some(4),
            ..UnitOptions::default()
        };
        match build_units_sparse(&g, &VertexSet::new(), &d, &p, 0.0, &many).unwrap() {
            SparseOutcome::Units(units) => {
                let mut seen = vec![false; g.n()];
                for u in &units {
                    assert!(verify_unit(&g, u, &d).valid);
                    for v in u.vertices() {
                        assert!(!seen[v], "units overlap at {v}");
                        seen[v] = true;
                    }
                }
            }
            SparseOutcome::Subdivision(model) => assert!(verify_subdivision(&g, &model).valid),
        }
    }

    #[test]
    fn sparse_route_exits_into_the_avoided_set() {
        // Three hubs adjacent to everything in a torus: every center sees an
        // exit at distance one, so exit rounds finish first.
        let base = families::grid_torus(12);
        let n = base.n() + 3;
        let mut extra = Vec::new();
        for hub in base.n()..n {
            for v in 0..base.n() {
                extra.push((hub, v));
            }
        }
        let g = families::with_edges(&base, n, &extra);
        let (d, p) = scales(n, 3);
        let x: VertexSet = (base.n()..n).collect();
        match build_units_sparse(&g, &x, &d, &p, 0.0, &UnitOptions::default()).unwrap() {
            SparseOutcome::Subdivision(model) => {
                assert_eq!(model.corners, vec![144, 145, 146]);
                assert!(verify_subdivision(&g, &model).valid);
            }
            other => panic!("{other:?}"),
        }
    }
}
