//! Zig-Zag routing over a planar overlay, and plain greedy routing as a
//! comparator.
//!
//! Zig-Zag runs, at the node `x` holding the message for `t`:
//!
//! 1. **Direct** delivery when `|xt| <= r`.
//! 2. **Greedy**: if `t` lies in the greedy region `A_k^x` and `x` has an
//!    out-edge for `k`, follow it. The out-neighbour is never farther from `t`.
//! 3. **Restricted** phase otherwise. With `t` between `A_i^x` and
//!    `A_{i+1}^x` and `o` the remaining order (the one in which `t` is below
//!    `x`), the message first goes to whichever out-neighbour of `x` in
//!    `A_i^x` or `A_{i+1}^x` is highest in `o`. It then alternates: a node on
//!    the `A_i^x` side forwards to an out-neighbour lower in `o` that is above
//!    `x` in order `i+1`, a node on the `A_{i+1}^x` side to one lower in `o`
//!    above `x` in order `i`. The phase ends at the first node `z` between the
//!    two regions, where the full strategy restarts.
//!
//! The phase remembers `x`; its coordinates travel with the message.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{order_cmp, sector_unchecked, OrderIndex, Sector, Site};
use crate::graph::{EdgeSetView, GraphError, Node, PathNetwork, UnitDiskGraph};
use crate::planarizer::PlanarOverlay;
use crate::NodeId;

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("hop limit must be at least 1")]
    ZeroHopLimit,
}

impl From<GraphError> for RoutingError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownNode(id) => RoutingError::UnknownNode(id),
            other => panic!("unexpected graph error during routing: {other}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HopMode {
    Direct,
    Greedy,
    ZigZagOnP1,
    ZigZagOnP2,
    RestartAtZ,
}

impl fmt::Display for HopMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HopMode::Direct => "direct",
            HopMode::Greedy => "greedy",
            HopMode::ZigZagOnP1 => "zigzag-p1",
            HopMode::ZigZagOnP2 => "zigzag-p2",
            HopMode::RestartAtZ => "restart",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub node: NodeId,
    pub mode: HopMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureReason {
    NoProgress,
    HopLimit,
    MissingOutNeighbor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Delivered,
    Failed(FailureReason),
}

/// One restricted phase of a Zig-Zag route.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedPhase {
    pub start: NodeId,
    /// `i` such that the phase treats `t` as lying between `A_i` and `A_{i+1}`.
    pub frame: OrderIndex,
    pub start_dist: f64,
    /// The restart node, when the phase ended normally.
    pub end: Option<NodeId>,
    pub end_dist: Option<f64>,
    /// Nodes that held the message during the phase, `start` included.
    pub visited: Vec<NodeId>,
    pub delivered: bool,
    /// Density hypothesis at `start`, when checked.
    pub hypothesis: Option<bool>,
    /// Forwards that stayed on one side because no crossing out-edge existed.
    pub side_steps: usize,
    /// The phase ended on a node outside the three expected sectors.
    pub anomalous: bool,
    /// Entered because `t` sat in a greedy region with no out-edge.
    pub fallthrough: bool,
}

impl RestrictedPhase {
    /// Either some node of the phase reached `t` directly, or the phase ended
    /// strictly closer to `t` than it started.
    pub fn made_progress(&self) -> bool {
        self.delivered || self.end_dist.is_some_and(|d| d < self.start_dist)
    }

    pub fn alternated(&self) -> bool {
        self.side_steps == 0 && !self.anomalous
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteTrace {
    pub source: NodeId,
    pub target: NodeId,
    /// Nodes reached after the source, in order.
    pub hops: Vec<Hop>,
    pub outcome: Outcome,
    pub euclid_length: f64,
    pub hop_count: usize,
    pub phases: Vec<RestrictedPhase>,
}

impl RouteTrace {
    fn new(source: NodeId, target: NodeId) -> Self {
        Self { source, target, hops: Vec::new(), outcome: Outcome::Delivered, euclid_length: 0.0, hop_count: 0, phases: Vec::new() }
    }

    pub fn delivered(&self) -> bool {
        self.outcome == Outcome::Delivered
    }

    /// Source followed by every hop node.
    pub fn nodes(&self) -> Vec<NodeId> {
        std::iter::once(self.source).chain(self.hops.iter().map(|h| h.node)).collect()
    }

    pub fn last_node(&self) -> NodeId {
        self.hops.last().map_or(self.source, |h| h.node)
    }

    /// Route length divided by the straight source-destination distance.
    pub fn stretch(&self, g: &UnitDiskGraph) -> Option<f64> {
        let d = g.dist(self.source, self.target).ok()?;
        (self.delivered() && d > 0.0).then(|| self.euclid_length / d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouterConfig {
    pub hop_limit: usize,
    /// Check the density hypothesis at the start of every restricted phase.
    pub density_check: bool,
}

impl RouterConfig {
    /// `hop_limit = 10 n`.
    pub fn for_graph(g: &UnitDiskGraph) -> Self {
        Self { hop_limit: 10 * g.len().max(1), density_check: false }
    }
}

/// Routing state shared by many routes over one overlay.
pub struct Router<'o, 'g> {
    overlay: &'o PlanarOverlay<'g>,
    view: EdgeSetView<'g>,
    sites: Vec<Site>,
    cfg: RouterConfig,
}

enum PhaseEnd {
    Delivered,
    Restart(usize),
    Failed(FailureReason),
}

impl<'o, 'g> Router<'o, 'g> {
    pub fn new(overlay: &'o PlanarOverlay<'g>, cfg: RouterConfig) -> Result<Self, RoutingError> {
        if cfg.hop_limit == 0 {
            return Err(RoutingError::ZeroHopLimit);
        }
        let sites = overlay.base().nodes().iter().map(Node::site).collect();
        Ok(Self { overlay, view: overlay.view(), sites, cfg })
    }

    fn g(&self) -> &'g UnitDiskGraph {
        self.overlay.base()
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        self.g().at(a).pos.dist(self.g().at(b).pos)
    }

    fn out(&self, x: usize, k: OrderIndex) -> Option<usize> {
        let to = self.overlay.out_neighbor(self.g().at(x).id, k)?;
        self.g().index_of(to).ok()
    }

    fn push(&self, trace: &mut RouteTrace, from: usize, to: usize, mode: HopMode) {
        trace.euclid_length += self.dist(from, to);
        trace.hop_count += 1;
        trace.hops.push(Hop { node: self.g().at(to).id, mode });
    }

    fn endpoints(&self, s: NodeId, t: NodeId) -> Result<(usize, usize), RoutingError> {
        Ok((self.g().index_of(s)?, self.g().index_of(t)?))
    }

    pub fn zigzag(&self, s: NodeId, t: NodeId) -> Result<RouteTrace, RoutingError> {
        let (si, ti) = self.endpoints(s, t)?;
        let mut trace = RouteTrace::new(s, t);
        let r = self.g().radius();
        let mut cur = si;
        let mut decided = HashSet::new();
        while cur != ti {
            if trace.hop_count >= self.cfg.hop_limit {
                trace.outcome = Outcome::Failed(FailureReason::HopLimit);
                break;
            }
            if self.dist(cur, ti) <= r {
                self.push(&mut trace, cur, ti, HopMode::Direct);
                break;
            }
            // top-level decisions depend only on (node, target): a repeat is a loop
            if !decided.insert(cur) {
                trace.outcome = Outcome::Failed(FailureReason::NoProgress);
                break;
            }
            let (xs, ts) = (&self.sites[cur], &self.sites[ti]);
            let (frame, fallthrough) = match sector_unchecked(xs, ts) {
                Some(Sector::Greedy(k)) => match self.out(cur, k) {
                    Some(next) => {
                        self.push(&mut trace, cur, next, HopMode::Greedy);
                        cur = next;
                        continue;
                    }
                    None => (nearest_between(xs, ts, k), true),
                },
                Some(Sector::Between(i)) => (i, false),
                None => {
                    trace.outcome = Outcome::Failed(FailureReason::NoProgress);
                    break;
                }
            };
            match self.restricted_phase(&mut trace, cur, ti, frame, fallthrough) {
                PhaseEnd::Delivered => break,
                PhaseEnd::Restart(z) => cur = z,
                PhaseEnd::Failed(reason) => {
                    trace.outcome = Outcome::Failed(reason);
                    break;
                }
            }
        }
        Ok(trace)
    }

    fn restricted_phase(&self, trace: &mut RouteTrace, x: usize, t: usize, frame: OrderIndex, fallthrough: bool) -> PhaseEnd {
        let g = self.g();
        let r = g.radius();
        let (p1_side, p2_side, receding) = (frame, frame.next(), frame.prev());
        let xs = self.sites[x];
        let mut phase = RestrictedPhase {
            start: g.at(x).id,
            frame,
            start_dist: self.dist(x, t),
            end: None,
            end_dist: None,
            visited: vec![g.at(x).id],
            delivered: false,
            hypothesis: self.cfg.density_check.then(|| hypothesis_at(self.overlay, x)),
            side_steps: 0,
            anomalous: false,
            fallthrough,
        };
        let highest = |a: &usize, b: &usize| order_cmp(receding, &self.sites[*a], &self.sites[*b]);

        let first = [self.out(x, p1_side), self.out(x, p2_side)].into_iter().flatten().max_by(highest);
        let Some(mut cur) = first else {
            trace.phases.push(phase);
            return PhaseEnd::Failed(FailureReason::MissingOutNeighbor);
        };
        let mut prev = x;

        let end = loop {
            let sector = sector_unchecked(&xs, &self.sites[cur]);
            let mode = match sector {
                Some(Sector::Greedy(k)) if k == p1_side => HopMode::ZigZagOnP1,
                Some(Sector::Greedy(k)) if k == p2_side => HopMode::ZigZagOnP2,
                Some(Sector::Between(i)) if i == frame => HopMode::RestartAtZ,
                _ => {
                    phase.anomalous = true;
                    HopMode::RestartAtZ
                }
            };
            self.push(trace, prev, cur, mode);
            phase.visited.push(g.at(cur).id);
            if mode == HopMode::RestartAtZ {
                phase.end = Some(g.at(cur).id);
                phase.end_dist = Some(self.dist(cur, t));
                break PhaseEnd::Restart(cur);
            }
            if cur == t {
                phase.delivered = true;
                break PhaseEnd::Delivered;
            }
            if trace.hop_count >= self.cfg.hop_limit {
                break PhaseEnd::Failed(FailureReason::HopLimit);
            }
            if self.dist(cur, t) <= r {
                self.push(trace, cur, t, HopMode::Direct);
                phase.visited.push(g.at(t).id);
                phase.delivered = true;
                break PhaseEnd::Delivered;
            }
            // cross to the other side: lower in `receding`, above x in the other side's order
            let (cross_order, stay_order) = if mode == HopMode::ZigZagOnP1 { (p2_side, p1_side) } else { (p1_side, p2_side) };
            let cs = self.sites[cur];
            let crossing = OrderIndex::ALL
                .iter()
                .filter_map(|&k| self.out(cur, k))
                .filter(|&v| order_cmp(receding, &self.sites[v], &cs).is_lt() && order_cmp(cross_order, &xs, &self.sites[v]).is_lt())
                .max_by(highest);
            let next = match crossing {
                Some(v) => v,
                None => match self.out(cur, stay_order) {
                    Some(v) => {
                        phase.side_steps += 1;
                        v
                    }
                    None => break PhaseEnd::Failed(FailureReason::MissingOutNeighbor),
                },
            };
            prev = cur;
            cur = next;
        };
        trace.phases.push(phase);
        end
    }

    pub fn greedy(&self, s: NodeId, t: NodeId) -> Result<RouteTrace, RoutingError> {
        let (si, ti) = self.endpoints(s, t)?;
        let mut trace = RouteTrace::new(s, t);
        let r = self.g().radius();
        let mut cur = si;
        while cur != ti {
            if trace.hop_count >= self.cfg.hop_limit {
                trace.outcome = Outcome::Failed(FailureReason::HopLimit);
                break;
            }
            let here = self.dist(cur, ti);
            if here <= r {
                self.push(&mut trace, cur, ti, HopMode::Direct);
                break;
            }
            let best =
                self.view.adjacent(cur).iter().copied().min_by(|&a, &b| self.dist(a, ti).total_cmp(&self.dist(b, ti)).then(a.cmp(&b)));
            match best {
                Some(next) if self.dist(next, ti) < here => {
                    self.push(&mut trace, cur, next, HopMode::Greedy);
                    cur = next;
                }
                _ => {
                    trace.outcome = Outcome::Failed(FailureReason::NoProgress);
                    break;
                }
            }
        }
        Ok(trace)
    }
}

/// For `t` in `A_k^x`, the in-between region adjacent to `A_k^x` on the side
/// `t` leans toward.
fn nearest_between(x: &Site, t: &Site, k: OrderIndex) -> OrderIndex {
    let d = |j: OrderIndex| t.coord.get(j) - x.coord.get(j);
    if d(k.next()) >= d(k.prev()) {
        k
    } else {
        k.prev()
    }
}

pub fn route_zigzag(overlay: &PlanarOverlay<'_>, s: NodeId, t: NodeId, cfg: RouterConfig) -> Result<RouteTrace, RoutingError> {
    Router::new(overlay, cfg)?.zigzag(s, t)
}

pub fn route_greedy(overlay: &PlanarOverlay<'_>, s: NodeId, t: NodeId, cfg: RouterConfig) -> Result<RouteTrace, RoutingError> {
    Router::new(overlay, cfg)?.greedy(s, t)
}

fn hypothesis_at(overlay: &PlanarOverlay<'_>, x: usize) -> bool {
    let g = overlay.base();
    let reach = 4.0 / 3f64.sqrt() * g.radius();
    let p = g.at(x).pos;
    g.nodes().iter().filter(|n| n.pos.dist(p) < reach).all(|n| overlay.out_degree(n.id) == 3)
}

/// Every node strictly within `4r/sqrt(3)` of `x` has three out-neighbours.
pub fn verify_density_hypothesis(overlay: &PlanarOverlay<'_>, x: NodeId) -> Result<bool, RoutingError> {
    Ok(hypothesis_at(overlay, overlay.base().index_of(x)?))
}
