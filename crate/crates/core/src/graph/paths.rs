use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{DirectedEdgeSet, GraphError, NodeId, UnitDiskGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Straight-line length of each edge; virtual edges count as one segment.
    EuclideanLength,
    HopCount,
}

/// An undirected network over the nodes of a [`UnitDiskGraph`].
pub trait PathNetwork {
    fn graph(&self) -> &UnitDiskGraph;
    fn adjacent(&self, i: usize) -> &[usize];
}

impl PathNetwork for UnitDiskGraph {
    fn graph(&self) -> &UnitDiskGraph {
        self
    }

    fn adjacent(&self, i: usize) -> &[usize] {
        self.adjacent_indices(i)
    }
}

/// An edge set over a graph, with orientation dropped.
#[derive(Debug, Clone)]
pub struct EdgeSetView<'g> {
    graph: &'g UnitDiskGraph,
    adjacency: Vec<Vec<usize>>,
}

impl<'g> EdgeSetView<'g> {
    pub fn new(graph: &'g UnitDiskGraph, edges: &DirectedEdgeSet) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); graph.len()];
        for e in edges {
            let (a, b) = (graph.index_of(e.from)?, graph.index_of(e.to)?);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(Self { graph, adjacency })
    }
}

impl PathNetwork for EdgeSetView<'_> {
    fn graph(&self) -> &UnitDiskGraph {
        self.graph
    }

    fn adjacent(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn dijkstra<N: PathNetwork + ?Sized>(net: &N, source: usize, metric: Metric, cutoff: f64) -> Vec<f64> {
    let g = net.graph();
    let mut dist = vec![f64::INFINITY; g.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &v in net.adjacent(u) {
            let w = match metric {
                Metric::EuclideanLength => g.at(u).pos.dist(g.at(v).pos),
                Metric::HopCount => 1.0,
            };
            let nd = d + w;
            if nd < dist[v] && nd <= cutoff {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    dist
}

/// Shortest-path values from `s` to every node, indexed like `graph().nodes()`;
/// `None` marks unreachable nodes.
pub fn distances_from<N: PathNetwork + ?Sized>(net: &N, s: NodeId, metric: Metric) -> Result<Vec<Option<f64>>, GraphError> {
    let src = net.graph().index_of(s)?;
    Ok(dijkstra(net, src, metric, f64::INFINITY).into_iter().map(|d| d.is_finite().then_some(d)).collect())
}

/// Exact shortest path value between `s` and `t`, or `None` when unreachable.
pub fn shortest_path_length<N: PathNetwork + ?Sized>(net: &N, s: NodeId, t: NodeId, metric: Metric) -> Result<Option<f64>, GraphError> {
    let g = net.graph();
    let ti = g.index_of(t)?;
    let si = g.index_of(s)?;
    let d = dijkstra(net, si, metric, f64::INFINITY)[ti];
    Ok(d.is_finite().then_some(d))
}
