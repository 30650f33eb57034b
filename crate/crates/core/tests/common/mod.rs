//! Independent oracles shared by the integration tests. None of them call into
//! the code they check beyond reading node positions.

#![allow(dead_code)]

use vrac_spanner::geometry::{AnchorConfig, CoordVariant, OrderIndex, Point2D};
use vrac_spanner::graph::UnitDiskGraph;
use vrac_spanner::NodeId;

pub fn graph(points: &[(f64, f64)], r: f64, variant: CoordVariant) -> UnitDiskGraph {
    let pts = points.iter().enumerate().map(|(i, &(x, y))| (NodeId(i as u32), Point2D::new(x, y))).collect();
    UnitDiskGraph::new(pts, r, AnchorConfig::unit_square_default(), variant).unwrap()
}

/// Exact segment test on integer coordinates: do the closed segments share a
/// point that is not an endpoint common to both?
pub fn segments_cross_exact(p1: (i64, i64), p2: (i64, i64), q1: (i64, i64), q2: (i64, i64)) -> bool {
    let sub = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0, a.1 - b.1);
    let cr = |a: (i64, i64), b: (i64, i64)| a.0 * b.1 - a.1 * b.0;
    let d = sub(p2, p1);
    let e = sub(q2, q1);
    let w = sub(q1, p1);
    let den = cr(d, e);
    let common = |pt: (i64, i64)| (pt == p1 || pt == p2) && (pt == q1 || pt == q2);
    if den != 0 {
        // p1 + t d = q1 + u e with t = cr(w, e)/den, u = cr(w, d)/den
        let (tn, un) = (cr(w, e), cr(w, d));
        let inside = |n: i64| if den > 0 { (0..=den).contains(&n) } else { (den..=0).contains(&n) };
        if !(inside(tn) && inside(un)) {
            return false;
        }
        // non-parallel lines meet once, so an endpoint on both lines is that point
        let endpoint = [p1, p2, q1, q2].into_iter().find(|&pt| {
            let (a, b) = (sub(pt, p1), sub(pt, q1));
            cr(a, d) == 0 && cr(b, e) == 0
        });
        return !endpoint.is_some_and(common);
    }
    if cr(w, d) != 0 {
        return false;
    }
    // collinear: project on d and intersect the parameter intervals
    let dot = |a: (i64, i64), b: (i64, i64)| a.0 * b.0 + a.1 * b.1;
    let dd = dot(d, d);
    let (s0, s1) = (dot(sub(q1, p1), d), dot(sub(q2, p1), d));
    let (lo, hi) = (s0.min(s1).max(0), s0.max(s1).min(dd));
    if lo > hi {
        return false;
    }
    if lo < hi {
        return true;
    }
    // a single touching point
    let pt = if lo == 0 { p1 } else { p2 };
    !common(pt)
}

fn area(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs() / 2.0
}

/// Height coordinates as area ratios: coordinate `k` is the share of the
/// triangle opposite anchor `k`.
pub fn height_by_area(p: Point2D, a: &AnchorConfig) -> [f64; 3] {
    let [a1, a2, a3] = OrderIndex::ALL.map(|k| a.anchor(k));
    let total = area(a1, a2, a3);
    [area(p, a2, a3) / total, area(a1, p, a3) / total, area(a1, a2, p) / total]
}

/// Angle in degrees between `y - x` and the direction from the centroid to
/// anchor `k`.
pub fn cone_angle(x: Point2D, y: Point2D, a: &AnchorConfig, k: OrderIndex) -> f64 {
    let c = a.centroid();
    let ak = a.anchor(k);
    let (ux, uy) = (y.x - x.x, y.y - x.y);
    let (vx, vy) = (ak.x - c.x, ak.y - c.y);
    let cos = (ux * vx + uy * vy) / ((ux * ux + uy * uy).sqrt() * (vx * vx + vy * vy).sqrt());
    cos.clamp(-1.0, 1.0).acos().to_degrees()
}

/// The greedy region of `y` seen from `x` by angle alone: the anchor direction
/// within 30 degrees. `None` when `y` sits too close to a cone border to call.
pub fn cone_oracle(x: Point2D, y: Point2D, a: &AnchorConfig) -> Option<Option<OrderIndex>> {
    let angles = OrderIndex::ALL.map(|k| cone_angle(x, y, a, k));
    if angles.iter().any(|&t| (t - 30.0).abs() < 1e-6) {
        return None;
    }
    Some(OrderIndex::ALL.into_iter().zip(angles).find(|&(_, t)| t < 30.0).map(|(k, _)| k))
}

/// Shortest path by enumerating every simple path. Returns `(length, hops)`
/// minima over all paths from `s` to `t`, with lengths summed from `s`.
pub fn exhaustive_shortest(pos: &[Point2D], adj: &[Vec<usize>], s: usize, t: usize) -> Option<(f64, usize)> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        pos: &[Point2D],
        adj: &[Vec<usize>],
        cur: usize,
        t: usize,
        len: f64,
        hops: usize,
        seen: &mut Vec<bool>,
        best: &mut Option<(f64, usize)>,
    ) {
        if cur == t {
            *best = Some(match *best {
                None => (len, hops),
                Some((l, h)) => (l.min(len), h.min(hops)),
            });
            return;
        }
        for &v in &adj[cur] {
            if !seen[v] {
                seen[v] = true;
                walk(pos, adj, v, t, len + pos[cur].dist(pos[v]), hops + 1, seen, best);
                seen[v] = false;
            }
        }
    }
    let mut seen = vec![false; pos.len()];
    seen[s] = true;
    let mut best = None;
    walk(pos, adj, s, t, 0.0, 0, &mut seen, &mut best);
    best
}

/// Plain adjacency of a unit disk graph, recomputed from positions.
pub fn udg_adjacency(pos: &[Point2D], r: f64) -> Vec<Vec<usize>> {
    (0..pos.len()).map(|i| (0..pos.len()).filter(|&j| j != i && pos[i].dist(pos[j]) <= r).collect()).collect()
}
