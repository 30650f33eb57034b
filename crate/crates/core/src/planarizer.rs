//! Construction of the planar overlays.
//!
//! Every node `x` picks, for each order `k`, the `<k`-minimum neighbour `y_k` in
//! its greedy region `A_k^x`. The plain overlay ([`build_gtilde`]) keeps these
//! radio links, optionally dropping those longer than `2r/sqrt(5)`. The
//! virtual-edge overlay ([`build_gtilde_prime`]) lets `y_k` look one radio hop
//! further for a better candidate of `x` that `x` cannot hear; when one exists
//! the link `x -> y_k` is replaced by a virtual edge `x -> y_k'` relayed by
//! `y_k`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{order_cmp, sector_unchecked, tilde_less_unchecked, CoordVariant, OrderIndex, Sector, Site};
use crate::graph::{distances_from, DirectedEdge, DirectedEdgeSet, EdgeKind, EdgeSetView, GraphError, Metric, Node, UnitDiskGraph};
use crate::NodeId;

#[derive(Debug, Error)]
pub enum PlanarizeError {
    #[error("relay recursion for node {from}, order {order} revisited a node or exceeded depth")]
    RecursionGuardTripped { from: NodeId, order: OrderIndex },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edge-length cap of the plain overlay, as a fraction of `r`: `2/sqrt(5)`.
pub fn capped_edge_factor() -> f64 {
    2.0 / 5f64.sqrt()
}

/// Upper bound on virtual-edge length under height coordinates, as a fraction
/// of `r`: `2/sqrt(3)`.
pub fn virtual_edge_factor() -> f64 {
    2.0 / 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    GtildeCapped,
    GtildePrime,
    EuclideanAnnounce,
}

impl fmt::Display for BuildMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BuildMode::GtildeCapped => "gtilde-capped",
            BuildMode::GtildePrime => "gtilde-prime",
            BuildMode::EuclideanAnnounce => "euclidean-announce",
        })
    }
}

impl FromStr for BuildMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gtilde-capped" => Ok(BuildMode::GtildeCapped),
            "gtilde-prime" => Ok(BuildMode::GtildePrime),
            "euclidean-announce" => Ok(BuildMode::EuclideanAnnounce),
            other => Err(format!("unknown build mode `{other}`")),
        }
    }
}

/// A directed overlay on top of a unit disk graph.
#[derive(Debug, Clone)]
pub struct PlanarOverlay<'g> {
    base: &'g UnitDiskGraph,
    edges: DirectedEdgeSet,
    virtual_count: usize,
}

impl<'g> PlanarOverlay<'g> {
    /// Wraps an edge set after checking it against `base`.
    pub fn from_edges(base: &'g UnitDiskGraph, edges: DirectedEdgeSet) -> Result<Self, GraphError> {
        edges.validate(base)?;
        let virtual_count = edges.virtual_count();
        Ok(Self { base, edges, virtual_count })
    }

    pub fn base(&self) -> &'g UnitDiskGraph {
        self.base
    }

    pub fn edges(&self) -> &DirectedEdgeSet {
        &self.edges
    }

    pub fn virtual_count(&self) -> usize {
        self.virtual_count
    }

    pub fn out_neighbor(&self, x: NodeId, k: OrderIndex) -> Option<NodeId> {
        self.edges.out_edge(x, k).map(|e| e.to)
    }

    pub fn out_degree(&self, x: NodeId) -> usize {
        self.edges.out_degree(x)
    }

    /// Undirected view for shortest-path queries.
    pub fn view(&self) -> EdgeSetView<'g> {
        EdgeSetView::new(self.base, &self.edges).expect("overlay endpoints belong to the base graph")
    }
}

/// Count of node identifiers broadcast by the distributed construction,
/// excluding neighbourhood discovery.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MessageLedger {
    pub ids_broadcast: usize,
    pub rounds: u32,
    pub per_node: BTreeMap<NodeId, usize>,
}

impl MessageLedger {
    fn record(&mut self, node: NodeId, ids: usize) {
        if ids > 0 {
            self.ids_broadcast += ids;
            *self.per_node.entry(node).or_default() += ids;
        }
    }
}

/// `<k`-minimum radio neighbour of node `x` inside `A_k^x`.
fn in_range_minimum(g: &UnitDiskGraph, sites: &[Site], x: usize, k: OrderIndex) -> Option<usize> {
    g.adjacent_indices(x)
        .iter()
        .copied()
        .filter(|&z| tilde_less_unchecked(k, &sites[x], &sites[z]))
        .min_by(|&a, &b| order_cmp(k, &sites[a], &sites[b]))
}

fn sites_of(g: &UnitDiskGraph) -> Vec<Site> {
    g.nodes().iter().map(Node::site).collect()
}

/// The plain overlay. With `cap_edges`, links longer than `2r/sqrt(5)` are dropped.
pub fn build_gtilde(g: &UnitDiskGraph, cap_edges: bool) -> PlanarOverlay<'_> {
    let sites = sites_of(g);
    let cap = capped_edge_factor() * g.radius();
    let mut edges = DirectedEdgeSet::new();
    for x in 0..g.len() {
        for k in OrderIndex::ALL {
            let Some(y) = in_range_minimum(g, &sites, x, k) else { continue };
            if cap_edges && g.at(x).pos.dist(g.at(y).pos) > cap {
                continue;
            }
            edges.insert(DirectedEdge::real(g.at(x).id, g.at(y).id, k)).expect("one selection per (node, order)");
        }
    }
    PlanarOverlay { base: g, edges, virtual_count: 0 }
}

/// One `(x, k)` selection: the in-range minimum and, when it is superseded,
/// the relay chain leading from it to the final endpoint.
struct Selection {
    x: usize,
    k: OrderIndex,
    relays: Vec<usize>,
}

/// Follows better candidates hidden from `x`, starting at its in-range
/// minimum `y`. Returns the chain `y, y', ...` (just `[y]` when nothing better
/// exists).
fn relay_chain(g: &UnitDiskGraph, sites: &[Site], x: usize, k: OrderIndex, y: usize) -> Result<Vec<usize>, PlanarizeError> {
    let xs = &sites[x];
    let xp = g.at(x).pos;
    let r = g.radius();
    let hidden_better = |cur: usize| {
        g.adjacent_indices(cur)
            .iter()
            .copied()
            .filter(|&z| {
                z != x && tilde_less_unchecked(k, xs, &sites[z]) && order_cmp(k, &sites[z], &sites[cur]).is_lt() && xp.dist(g.at(z).pos) > r
            })
            .min_by(|&a, &b| order_cmp(k, &sites[a], &sites[b]))
    };

    let mut chain = vec![y];
    match g.variant() {
        // a single look-ahead suffices under height coordinates
        CoordVariant::TriangleHeight => {
            if let Some(z) = hidden_better(y) {
                chain.push(z);
            }
        }
        CoordVariant::EuclideanDistance => {
            let mut seen = HashSet::from([x, y]);
            let mut cur = y;
            while let Some(z) = hidden_better(cur) {
                if !seen.insert(z) || chain.len() > g.len() {
                    return Err(PlanarizeError::RecursionGuardTripped { from: g.at(x).id, order: k });
                }
                chain.push(z);
                cur = z;
            }
        }
    }
    Ok(chain)
}

fn select(g: &UnitDiskGraph) -> Result<Vec<Selection>, PlanarizeError> {
    let sites = sites_of(g);
    let mut out = Vec::new();
    for x in 0..g.len() {
        for k in OrderIndex::ALL {
            if let Some(y) = in_range_minimum(g, &sites, x, k) {
                let relays = relay_chain(g, &sites, x, k, y)?;
                out.push(Selection { x, k, relays });
            }
        }
    }
    Ok(out)
}

fn overlay_from<'g>(g: &'g UnitDiskGraph, selections: &[Selection]) -> PlanarOverlay<'g> {
    let mut edges = DirectedEdgeSet::new();
    let mut virtual_count = 0;
    for s in selections {
        let from = g.at(s.x).id;
        let edge = if s.relays.len() == 1 {
            DirectedEdge::real(from, g.at(s.relays[0]).id, s.k)
        } else {
            virtual_count += 1;
            let path = std::iter::once(from).chain(s.relays.iter().map(|&i| g.at(i).id)).collect();
            DirectedEdge::virtual_edge(s.k, path)
        };
        edges.insert(edge).expect("one selection per (node, order)");
    }
    PlanarOverlay { base: g, edges, virtual_count }
}

/// Records the replacement announcements: each relay names the next node of
/// its chain. Returns the longest chain in links.
fn record_replacements(g: &UnitDiskGraph, selections: &[Selection], ledger: &mut MessageLedger) -> u32 {
    let mut depth = 0;
    for s in selections {
        for w in s.relays.windows(2) {
            ledger.record(g.at(w[0]).id, 1);
        }
        depth = depth.max(s.relays.len() as u32 - 1);
    }
    depth
}

/// The virtual-edge overlay with the two-round message accounting: every node
/// announces its (up to three) in-range minima, then every superseded minimum
/// announces the replacement endpoint.
pub fn build_gtilde_prime(g: &UnitDiskGraph) -> Result<(PlanarOverlay<'_>, MessageLedger), PlanarizeError> {
    let selections = select(g)?;
    let mut ledger = MessageLedger::default();
    for s in &selections {
        ledger.record(g.at(s.x).id, 1);
    }
    let depth = record_replacements(g, &selections, &mut ledger);
    ledger.rounds = u32::from(!selections.is_empty()) + depth;
    Ok((overlay_from(g, &selections), ledger))
}

/// Same overlay as [`build_gtilde_prime`], accounted for nodes that know the
/// positions of their neighbours: each node decides on its own whether it is a
/// minimum for a neighbour, so only replacement announcements are sent.
pub fn build_gtilde_prime_euclidean_announce(g: &UnitDiskGraph) -> Result<(PlanarOverlay<'_>, MessageLedger), PlanarizeError> {
    let selections = select(g)?;
    let mut ledger = MessageLedger::default();
    ledger.rounds = record_replacements(g, &selections, &mut ledger);
    Ok((overlay_from(g, &selections), ledger))
}

/// Builds the overlay for `mode`. The capped plain overlay carries an empty ledger.
pub fn build(g: &UnitDiskGraph, mode: BuildMode) -> Result<(PlanarOverlay<'_>, MessageLedger), PlanarizeError> {
    match mode {
        BuildMode::GtildeCapped => Ok((build_gtilde(g, true), MessageLedger::default())),
        BuildMode::GtildePrime => build_gtilde_prime(g),
        BuildMode::EuclideanAnnounce => build_gtilde_prime_euclidean_announce(g),
    }
}

/// Which source/destination pairs a stretch report covers.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSampling {
    All,
    /// Up to `count` distinct-endpoint pairs drawn uniformly among pairs
    /// connected in the base graph.
    Random {
        count: usize,
        seed: u64,
    },
    Explicit(Vec<(NodeId, NodeId)>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StretchOutcome {
    Ratio(f64),
    UnreachableInBase,
    UnreachableInOverlay,
}

/// Ratio of overlay to base-graph shortest Euclidean path length per pair.
pub fn stretch_report(
    g: &UnitDiskGraph,
    overlay: &PlanarOverlay<'_>,
    pairs: &PairSampling,
) -> Result<BTreeMap<(NodeId, NodeId), StretchOutcome>, GraphError> {
    let ids: Vec<NodeId> = g.nodes().iter().map(|n| n.id).collect();
    let pairs: Vec<(NodeId, NodeId)> = match pairs {
        PairSampling::All => ids.iter().flat_map(|&s| ids.iter().filter(move |&&t| t != s).map(move |&t| (s, t))).collect(),
        PairSampling::Explicit(p) => p.clone(),
        PairSampling::Random { count, seed } => sample_connected_pairs(g, *count, *seed),
    };

    let view = overlay.view();
    let mut by_source: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(s, t) in &pairs {
        g.index_of(t)?;
        by_source.entry(s).or_default().push(t);
    }
    let mut out = BTreeMap::new();
    for (s, targets) in by_source {
        let base = distances_from(g, s, Metric::EuclideanLength)?;
        let over = distances_from(&view, s, Metric::EuclideanLength)?;
        for t in targets {
            let ti = g.index_of(t)?;
            let outcome = match (base[ti], over[ti]) {
                (None, _) => StretchOutcome::UnreachableInBase,
                (Some(_), None) => StretchOutcome::UnreachableInOverlay,
                (Some(0.0), Some(_)) => StretchOutcome::Ratio(1.0),
                (Some(b), Some(o)) => StretchOutcome::Ratio(o / b),
            };
            out.insert((s, t), outcome);
        }
    }
    Ok(out)
}

/// Uniform pairs `(s, t)`, `s != t`, in the same component of `g`. Stops early
/// when such pairs are too rare to find.
pub fn sample_connected_pairs(g: &UnitDiskGraph, count: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    let n = g.len();
    if n < 2 {
        return Vec::new();
    }
    let labels = g.component_labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s != t && labels[s] == labels[t] {
            out.push((g.at(s).id, g.at(t).id));
        }
    }
    out
}

/// The overlay path for a radio link `(x, y)` obtained by repeatedly following
/// the out-edge toward the far endpoint: if `y` lies in `A_k^x`, go to the
/// out-neighbour of `x` for `k` and continue from there; otherwise `x` lies in
/// a greedy region of `y` and the roles swap. Returns `None` when a required
/// out-edge is missing.
pub fn edge_descent_path(overlay: &PlanarOverlay<'_>, x: NodeId, y: NodeId) -> Option<Vec<NodeId>> {
    let g = overlay.base();
    let site = |id: NodeId| g.node(id).map(Node::site);
    // front grows from x, back grows from y (stored reversed)
    let mut front = vec![x];
    let mut back = vec![y];
    for _ in 0..=g.len() {
        let (a, b) = (*front.last()?, *back.last()?);
        if a == b {
            back.pop();
            front.extend(back.into_iter().rev());
            return Some(front);
        }
        let (sa, sb) = (site(a)?, site(b)?);
        match sector_unchecked(&sa, &sb)? {
            Sector::Greedy(k) => front.push(overlay.out_neighbor(a, k)?),
            Sector::Between(_) => {
                let Some(Sector::Greedy(k)) = sector_unchecked(&sb, &sa) else { return None };
                back.push(overlay.out_neighbor(b, k)?);
            }
        }
    }
    None
}

/// Whether the `(x, y)` radio link is an edge of the overlay (either orientation).
pub fn overlay_has_pair(overlay: &PlanarOverlay<'_>, x: NodeId, y: NodeId) -> bool {
    OrderIndex::ALL.iter().any(|&k| overlay.out_neighbor(x, k) == Some(y) || overlay.out_neighbor(y, k) == Some(x))
}

/// Total straight-line length of a node path.
pub fn path_length(g: &UnitDiskGraph, path: &[NodeId]) -> Result<f64, GraphError> {
    path.windows(2).map(|w| g.dist(w[0], w[1])).sum()
}

/// Virtual edges of an overlay.
pub fn virtual_edges<'a>(overlay: &'a PlanarOverlay<'_>) -> impl Iterator<Item = &'a DirectedEdge> {
    overlay.edges().iter().filter(|e| e.kind == EdgeKind::Virtual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AnchorConfig, Point2D};
    use crate::graph::check_planarity;

    pub(crate) fn graph(points: &[(f64, f64)], r: f64) -> UnitDiskGraph {
        let pts = points.iter().enumerate().map(|(i, &(x, y))| (NodeId(i as u32), Point2D::new(x, y))).collect();
        UnitDiskGraph::new(pts, r, AnchorConfig::unit_square_default(), CoordVariant::TriangleHeight).unwrap()
    }

    #[test]
    fn two_close_nodes_one_edge() {
        // (0.5, 0.6) lies straight toward A1 from (0.5, 0.5)
        let g = graph(&[(0.5, 0.5), (0.5, 0.6)], 0.2);
        let o = build_gtilde(&g, true);
        assert_eq!(o.edges().len(), 1);
        let e = o.edges().iter().next().unwrap();
        assert_eq!((e.from, e.to, e.order), (NodeId(0), NodeId(1), OrderIndex::ONE));
    }

    #[test]
    fn cap_drops_long_link() {
        let g = graph(&[(0.5, 0.5), (0.5, 0.595)], 0.1);
        assert_eq!(build_gtilde(&g, false).edges().len(), 1);
        assert!(build_gtilde(&g, true).edges().is_empty());
    }

    #[test]
    fn build_mode_parse() {
        for m in [BuildMode::GtildeCapped, BuildMode::GtildePrime, BuildMode::EuclideanAnnounce] {
            assert_eq!(m.to_string().parse::<BuildMode>().unwrap(), m);
        }
        assert!("nope".parse::<BuildMode>().is_err());
    }

    #[test]
    fn no_replacement_without_hidden_candidate() {
        let g = graph(&[(0.5, 0.5), (0.5, 0.58), (0.3, 0.5)], 0.1);
        let (o, ledger) = build_gtilde_prime(&g).unwrap();
        assert_eq!(o.virtual_count(), 0);
        assert!(ledger.ids_broadcast <= 3 * g.len());
        let (_, l2) = build_gtilde_prime_euclidean_announce(&g).unwrap();
        assert_eq!(l2.ids_broadcast, 0);
        assert_eq!(l2.rounds, 0);
    }

    #[test]
    fn empty_graph() {
        let g = graph(&[], 0.1);
        let (o, ledger) = build_gtilde_prime(&g).unwrap();
        assert!(o.edges().is_empty());
        assert_eq!(ledger, MessageLedger::default());
        assert!(check_planarity(&g, o.edges()).unwrap().is_empty());
    }

    #[test]
    fn adjacent_surviving_pair_has_unit_stretch() {
        let g = graph(&[(0.5, 0.5), (0.5, 0.58)], 0.1);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let rep = stretch_report(&g, &o, &PairSampling::Explicit(vec![(NodeId(0), NodeId(1))])).unwrap();
        assert_eq!(rep[&(NodeId(0), NodeId(1))], StretchOutcome::Ratio(1.0));
    }

    #[test]
    fn disconnected_pairs_reported() {
        let g = graph(&[(0.1, 0.1), (0.9, 0.9)], 0.1);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let rep = stretch_report(&g, &o, &PairSampling::All).unwrap();
        assert_eq!(rep.len(), 2);
        assert!(rep.values().all(|&v| v == StretchOutcome::UnreachableInBase));
        assert!(sample_connected_pairs(&g, 5, 1).is_empty());
    }

    #[test]
    fn hidden_candidate_becomes_virtual_edge() {
        // 2 lies in A_1 of node 0, below 1, out of 0's range but within 1's
        let g = graph(&[(0.5, 0.5), (0.54, 0.588), (0.45, 0.5875)], 0.1);
        assert!(g.dist(NodeId(0), NodeId(2)).unwrap() > 0.1);
        let (o, ledger) = build_gtilde_prime(&g).unwrap();
        assert_eq!(o.virtual_count(), 1);
        let e = o.edges().out_edge(NodeId(0), OrderIndex::ONE).unwrap();
        assert_eq!(e.kind, EdgeKind::Virtual);
        assert_eq!(e.underlying_path, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert!(g.dist(NodeId(0), NodeId(2)).unwrap() <= virtual_edge_factor() * g.radius());
        o.edges().validate(&g).unwrap();
        // one announcement per selection plus the relay naming 2
        assert_eq!(ledger.ids_broadcast, o.edges().len() + 1);
        assert_eq!(ledger.per_node[&NodeId(1)], 1 + o.out_degree(NodeId(1)));
        assert_eq!(ledger.rounds, 2);

        let (o2, l2) = build_gtilde_prime_euclidean_announce(&g).unwrap();
        assert_eq!(o2.edges(), o.edges());
        assert_eq!(l2.ids_broadcast, 1);
        assert_eq!(l2.rounds, 1);
        assert!(check_planarity(&g, o.edges()).unwrap().is_empty());
    }
}
