//! Unit disk graphs, directed overlay edge sets and the oracles used to check
//! them: shortest paths, straight-line planarity and the half-theta-6 graph.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    self, order_cmp, tilde_less_unchecked, AnchorConfig, CoordVariant, GeoError, OrderIndex, Point2D, Site, VracCoord, EPS_GEO,
};
pub use crate::NodeId;

pub mod io;
mod paths;
mod planarity;

pub use paths::{distances_from, shortest_path_length, EdgeSetView, Metric, PathNetwork};
pub use planarity::{check_planarity, Crossing};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("region is not strictly inside the anchor triangle")]
    RegionOutsideTriangle,
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("node {id}: {source}")]
    Geometry {
        id: NodeId,
        #[source]
        source: GeoError,
    },
    #[error("node {from} already has an out-edge for order {order}")]
    DuplicateOutEdge { from: NodeId, order: OrderIndex },
    #[error("malformed edge {from}->{to}: {reason}")]
    MalformedEdge { from: NodeId, to: NodeId, reason: String },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 };

    pub fn corners(&self) -> [Point2D; 4] {
        [Point2D::new(self.x0, self.y0), Point2D::new(self.x1, self.y0), Point2D::new(self.x1, self.y1), Point2D::new(self.x0, self.y1)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Point2D,
    pub coord: VracCoord,
}

impl Node {
    pub fn site(&self) -> Site {
        Site::new(self.id, self.coord)
    }
}

/// Embedded node set with communication radius `r`. Two nodes are adjacent iff
/// they are at distance at most `r`.
#[derive(Debug, Clone)]
pub struct UnitDiskGraph {
    nodes: Vec<Node>,
    radius: f64,
    anchors: AnchorConfig,
    variant: CoordVariant,
    seed: Option<u64>,
    index: HashMap<NodeId, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl UnitDiskGraph {
    /// Builds a graph from positioned nodes, computing each node's coordinates
    /// with `variant`. Fails on duplicate ids or nodes outside the anchors.
    pub fn new(points: Vec<(NodeId, Point2D)>, radius: f64, anchors: AnchorConfig, variant: CoordVariant) -> Result<Self, GraphError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GraphError::InvalidRadius(radius));
        }
        let mut index = HashMap::with_capacity(points.len());
        let mut nodes = Vec::with_capacity(points.len());
        for (i, (id, pos)) in points.into_iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(GraphError::DuplicateNode(id));
            }
            let coord = geometry::vrac(pos, &anchors, variant).map_err(|source| GraphError::Geometry { id, source })?;
            nodes.push(Node { id, pos, coord });
        }
        let adjacency = brute_force_adjacency(&nodes, radius);
        Ok(Self { nodes, radius, anchors, variant, seed: None, index, adjacency })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn anchors(&self) -> &AnchorConfig {
        &self.anchors
    }

    pub fn variant(&self) -> CoordVariant {
        self.variant
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn index_of(&self, id: NodeId) -> Result<usize, GraphError> {
        self.index.get(&id).copied().ok_or(GraphError::UnknownNode(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn at(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn pos(&self, id: NodeId) -> Result<Point2D, GraphError> {
        Ok(self.nodes[self.index_of(id)?].pos)
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> Result<f64, GraphError> {
        Ok(self.pos(a)?.dist(self.pos(b)?))
    }

    /// Neighbour indices of the node at index `i`.
    pub fn adjacent_indices(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// All `v != u` with `|uv| <= r`.
    pub fn neighbors(&self, u: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.index_of(u)?;
        Ok(self.adjacency[i].iter().map(|&j| self.nodes[j].id).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn average_degree(&self) -> f64 {
        if self.nodes.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.nodes.len() as f64
        }
    }

    /// Undirected edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, adj)| adj.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Connected-component label per node index.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        for start in 0..self.nodes.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&c| c == 0)
    }
}

fn brute_force_adjacency(nodes: &[Node], radius: f64) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); nodes.len()];
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i].pos.dist(nodes[j].pos) <= radius {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// `n` points drawn i.i.d. uniformly in `region` with a ChaCha8 stream seeded
/// from `seed`; node ids are `0..n`.
pub fn generate_random_udg(
    n: usize,
    r: f64,
    region: Rect,
    anchors: AnchorConfig,
    variant: CoordVariant,
    seed: u64,
) -> Result<UnitDiskGraph, GraphError> {
    if !region.corners().iter().all(|&c| anchors.strictly_contains(c)) {
        return Err(GraphError::RegionOutsideTriangle);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|i| {
            let x = region.x0 + (region.x1 - region.x0) * rng.gen::<f64>();
            let y = region.y0 + (region.y1 - region.y0) * rng.gen::<f64>();
            (NodeId(i as u32), Point2D::new(x, y))
        })
        .collect();
    Ok(UnitDiskGraph::new(points, r, anchors, variant)?.with_seed(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Real,
    Virtual,
}

/// An oriented overlay edge selected for `order` at `from`. Virtual edges carry
/// the radio path they stand for.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub order: OrderIndex,
    pub kind: EdgeKind,
    pub underlying_path: Vec<NodeId>,
}

impl DirectedEdge {
    pub fn real(from: NodeId, to: NodeId, order: OrderIndex) -> Self {
        Self { from, to, order, kind: EdgeKind::Real, underlying_path: vec![from, to] }
    }

    pub fn virtual_edge(order: OrderIndex, path: Vec<NodeId>) -> Self {
        Self { from: path[0], to: *path.last().expect("non-empty path"), order, kind: EdgeKind::Virtual, underlying_path: path }
    }

    /// Endpoints as an unordered pair.
    pub fn key(&self) -> (NodeId, NodeId) {
        if self.from <= self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        }
    }
}

/// Overlay edges with at most one outgoing edge per `(node, order)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirectedEdgeSet {
    edges: Vec<DirectedEdge>,
    slots: HashMap<(NodeId, OrderIndex), usize>,
}

impl DirectedEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, edge: DirectedEdge) -> Result<(), GraphError> {
        let slot = (edge.from, edge.order);
        if self.slots.contains_key(&slot) {
            return Err(GraphError::DuplicateOutEdge { from: edge.from, order: edge.order });
        }
        self.slots.insert(slot, self.edges.len());
        self.edges.push(edge);
        Ok(())
    }

    pub fn out_edge(&self, from: NodeId, order: OrderIndex) -> Option<&DirectedEdge> {
        self.slots.get(&(from, order)).map(|&i| &self.edges[i])
    }

    pub fn out_degree(&self, from: NodeId) -> usize {
        OrderIndex::ALL.iter().filter(|&&k| self.slots.contains_key(&(from, k))).count()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DirectedEdge> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn virtual_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Virtual).count()
    }

    /// Distinct unordered endpoint pairs, sorted.
    pub fn undirected_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut pairs: Vec<_> = self.edges.iter().map(DirectedEdge::key).collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Checks every edge against `g`: endpoints exist, real edges are radio
    /// links, virtual edges follow a chain of radio links of at least two hops.
    pub fn validate(&self, g: &UnitDiskGraph) -> Result<(), GraphError> {
        let r = g.radius();
        for e in &self.edges {
            let bad = |reason: &str| GraphError::MalformedEdge { from: e.from, to: e.to, reason: reason.to_owned() };
            g.index_of(e.from)?;
            g.index_of(e.to)?;
            if e.from == e.to {
                return Err(bad("self loop"));
            }
            let path = &e.underlying_path;
            if path.first() != Some(&e.from) || path.last() != Some(&e.to) {
                return Err(bad("path endpoints differ from edge endpoints"));
            }
            match e.kind {
                EdgeKind::Real if path.len() != 2 => return Err(bad("real edge with relay path")),
                EdgeKind::Virtual if path.len() < 3 => return Err(bad("virtual edge shorter than two hops")),
                _ => {}
            }
            for w in path.windows(2) {
                if g.dist(w[0], w[1])? > r + EPS_GEO {
                    return Err(bad("path hop longer than the radius"));
                }
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a DirectedEdgeSet {
    type Item = &'a DirectedEdge;
    type IntoIter = std::slice::Iter<'a, DirectedEdge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

/// For each node `x` and order `k`, the edge to the `<k`-minimum of
/// `{ z | x ~<k z }` over all nodes, with no radius restriction. Under height
/// coordinates with equilateral anchors this is the half-theta-6 graph. Edges
/// are marked `Real` whether or not they are radio links.
pub fn half_theta6(g: &UnitDiskGraph) -> DirectedEdgeSet {
    let sites: Vec<Site> = g.nodes().iter().map(Node::site).collect();
    let mut out = DirectedEdgeSet::new();
    for x in &sites {
        for k in OrderIndex::ALL {
            let best = sites.iter().filter(|z| tilde_less_unchecked(k, x, z)).min_by(|a, b| order_cmp(k, a, b));
            if let Some(y) = best {
                out.insert(DirectedEdge::real(x.id, y.id, k)).expect("one edge per slot");
            }
        }
    }
    out
}
