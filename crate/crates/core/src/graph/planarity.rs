use crate::geometry::{segments_intersect, Point2D};

use super::{DirectedEdgeSet, GraphError, NodeId, UnitDiskGraph};

/// Two overlay edges, drawn as straight segments, that properly cross.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub a: (NodeId, NodeId),
    pub b: (NodeId, NodeId),
}

/// All pairs of edges whose straight-line drawings cross. Orientation and
/// duplicates are ignored; an empty result means the drawing is plane.
pub fn check_planarity(g: &UnitDiskGraph, edges: &DirectedEdgeSet) -> Result<Vec<Crossing>, GraphError> {
    let mut segs: Vec<((NodeId, NodeId), Point2D, Point2D)> =
        edges.undirected_pairs().into_iter().map(|(u, v)| Ok(((u, v), g.pos(u)?, g.pos(v)?))).collect::<Result<_, GraphError>>()?;
    // sweep over x-extents
    segs.sort_by(|a, b| a.1.x.min(a.2.x).total_cmp(&b.1.x.min(b.2.x)));
    let mut out = Vec::new();
    for i in 0..segs.len() {
        let (ka, p1, p2) = segs[i];
        let right = p1.x.max(p2.x);
        for &(kb, q1, q2) in &segs[i + 1..] {
            if q1.x.min(q2.x) > right + crate::EPS_GEO {
                break;
            }
            if segments_intersect(p1, p2, q1, q2) {
                let (a, b) = if ka <= kb { (ka, kb) } else { (kb, ka) };
                out.push(Crossing { a, b });
            }
        }
    }
    out.sort_by_key(|c| (c.a, c.b));
    Ok(out)
}
