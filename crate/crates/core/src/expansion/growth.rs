use serde::{Deserialize, Serialize};

use super::{floor_pow, DerivedScales, ExpansionParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub ball: VertexSet,
    pub steps: usize,
    /// `|B^j|` for `j = 0..=steps`.
    pub layer_sizes: Vec<usize>,
    /// `floor(m^(1-eta))`.
    pub target: usize,
    /// `ceil(4 log m / lambda)`.
    pub step_limit: usize,
    pub reached_target: bool,
    /// Whether `|W| <= lambda |S| / 2` held; without it the growth guarantee lapses.
    pub precondition_held: bool,
}

/// Grows `B^j_{H-W}(S)` until it has at least `m^(1-eta)` vertices, stops
/// growing, or `j` reaches `ceil(4 log m / lambda)`.
pub fn grow_ball_guaranteed(
    h: &Graph,
    s: &VertexSet,
    w: &VertexSet,
    d: &DerivedScales,
    p: &ExpansionParams,
) -> Result<GrowthReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    s.check_range(h.n())?;
    w.check_range(h.n())?;
    if let Some(v) = s.first_common(w) {
        return Err(Error::Overlap(v));
    }
    let rate = d.rate(p);
    let precondition_held = (w.len() as f64) <= rate * s.len() as f64 / 2.0;
    if !precondition_held {
        log::warn!(
            "ball growth: |W| = {} exceeds lambda |S| / 2 = {}",
            w.len(),
            rate * s.len() as f64 / 2.0
        );
    }
    let target = floor_pow(d.m, 1.0 - p.eta);
    let step_limit = (4.0 * (d.m as f64).ln() / rate).ceil().max(0.0) as usize;

    let mut seen = w.to_mask(h.n());
    let mut ball = s.as_slice().to_vec();
    for &v in &ball {
        seen[v] = true;
    }
    let mut frontier = ball.clone();
    let mut layer_sizes = vec![ball.len()];
    while ball.len() < target && layer_sizes.len() <= step_limit {
        let mut next = Vec::new();
        for &u in &frontier {
            for &x in h.neighbors(u) {
                if !seen[x] {
                    seen[x] = true;
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        ball.extend_from_slice(&next);
        layer_sizes.push(ball.len());
        frontier = next;
    }
    Ok(GrowthReport {
        reached_target: ball.len() >= target,
        ball: ball.into_iter().collect(),
        steps: layer_sizes.len() - 1,
        layer_sizes,
        target,
        step_limit,
        precondition_held,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn whole_graph_needs_no_steps() {
        let g = families::complete(9);
        let p = ExpansionParams::new(0.1, 0.125, 9, 2).unwrap();
        let d = DerivedScales::new(9, &p).unwrap();
        let r = grow_ball_guaranteed(&g, &(0..9).collect(), &VertexSet::new(), &d, &p).unwrap();
        assert_eq!(r.steps, 0);
        assert!(r.reached_target);
    }

    #[test]
    fn one_step_fills_a_clique() {
        let g = families::complete(9);
        let p = ExpansionParams::new(0.1, 0.125, 9, 2).unwrap();
        let d = DerivedScales::new(9, &p).unwrap();
        let r =
            grow_ball_guaranteed(&g, &VertexSet::singleton(0), &VertexSet::new(), &d, &p).unwrap();
        assert_eq!(r.target, 6);
        assert_eq!(r.steps, 1);
        assert_eq!(r.ball.len(), 9);
    }

    #[test]
    fn avoided_vertices_block_growth() {
        let g = families::path(10);
        let p = ExpansionParams::new(0.1, 0.125, 10, 2).unwrap();
        let d = DerivedScales::new(10, &p).unwrap();
        let r = grow_ball_guaranteed(
            &g,
            &VertexSet::singleton(0),
            &VertexSet::singleton(3),
            &d,
            &p,
        )
        .unwrap();
        assert_eq!(r.ball, (0..3).collect());
        assert!(!r.reached_target);
        assert!(!r.precondition_held);
        assert!(grow_ball_guaranteed(&g, &VertexSet::new(), &VertexSet::new(), &d, &p).is_err());
    }
}
