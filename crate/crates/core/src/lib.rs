//! Planar spanners of unit disk graphs built from virtual raw anchor
//! coordinates, the Zig-Zag routing algorithm over them, and an experiment
//! harness that measures virtual-edge counts, path stretch and delivery rates.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod geometry;
pub mod graph;
pub mod harness;
pub mod planarizer;
pub mod routing;

/// Identifier of a network node; unique within a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub use geometry::{AnchorConfig, CoordVariant, OrderIndex, Point2D, VracCoord, EPS_GEO};
pub use graph::{DirectedEdge, DirectedEdgeSet, EdgeKind, UnitDiskGraph};
pub use planarizer::{MessageLedger, PlanarOverlay};
pub use routing::{RouteTrace, RouterConfig};
