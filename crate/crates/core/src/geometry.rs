//! Plane geometry and virtual raw anchor coordinates.
//!
//! Nodes are localised by their relation to three anchors `A1, A2, A3`. Two
//! coordinate variants are supported:
//!
//! * [`CoordVariant::EuclideanDistance`]: the raw distances `(d(x,A1), d(x,A2), d(x,A3))`.
//! * [`CoordVariant::TriangleHeight`]: the heights of the triangles `A2 x A3`,
//!   `A1 x A3`, `A1 x A2`, normalised to sum to one. For an equilateral anchor
//!   triangle these are exactly the barycentric coordinates of `x`.
//!
//! Each coordinate induces a total order `<k` on nodes (ties broken by node id),
//! and the dominance relations `~<k` derived from them carve the plane around a
//! node into three greedy regions and three in-between regions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::NodeId;

/// Tolerance, in plane units, for every geometric predicate.
pub const EPS_GEO: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("point ({x}, {y}) lies outside the anchor triangle")]
    PointOutsideTriangle { x: f64, y: f64 },
    #[error("anchor triangle is not equilateral")]
    NotEquilateral,
    #[error("anchors are collinear")]
    CollinearAnchors,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("coordinate variants differ: {0} vs {1}")]
    VariantMismatch(CoordVariant, CoordVariant),
    #[error("order index {0} is not in 1..=3")]
    InvalidOrderIndex(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(self, other: Point2D) -> Point2D {
        Point2D::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `abc`; positive when counter-clockwise.
pub fn cross(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Orientation of `c` relative to the directed line `ab`, with `c` counted as
/// collinear when its distance to the line is at most [`EPS_GEO`].
pub fn orientation(a: Point2D, b: Point2D, c: Point2D) -> Ordering {
    let len = a.dist(b);
    let det = cross(a, b, c);
    if len == 0.0 {
        return Ordering::Equal;
    }
    let signed = det / len;
    if signed > EPS_GEO {
        Ordering::Greater
    } else if signed < -EPS_GEO {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Index `k` of the order relation `<k`, always in `1..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrderIndex(u8);

impl OrderIndex {
    pub const ONE: OrderIndex = OrderIndex(1);
    pub const TWO: OrderIndex = OrderIndex(2);
    pub const THREE: OrderIndex = OrderIndex(3);
    pub const ALL: [OrderIndex; 3] = [Self::ONE, Self::TWO, Self::THREE];

    pub fn new(k: u8) -> Result<Self, GeoError> {
        if (1..=3).contains(&k) {
            Ok(OrderIndex(k))
        } else {
            Err(GeoError::InvalidOrderIndex(k))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based slot in a coordinate triple.
    pub fn slot(self) -> usize {
        usize::from(self.0 - 1)
    }

    /// Cyclic successor: 1 -> 2 -> 3 -> 1.
    pub fn next(self) -> OrderIndex {
        OrderIndex(self.0 % 3 + 1)
    }

    pub fn prev(self) -> OrderIndex {
        OrderIndex((self.0 + 1) % 3 + 1)
    }

    /// The two other indices, in cyclic order after `self`.
    pub fn others(self) -> [OrderIndex; 2] {
        [self.next(), self.next().next()]
    }
}

impl fmt::Display for OrderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordVariant {
    EuclideanDistance,
    TriangleHeight,
}

impl fmt::Display for CoordVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordVariant::EuclideanDistance => "euclidean",
            CoordVariant::TriangleHeight => "height",
        })
    }
}

impl std::str::FromStr for CoordVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(CoordVariant::EuclideanDistance),
            "height" => Ok(CoordVariant::TriangleHeight),
            other => Err(format!("unknown coordinate variant `{other}`")),
        }
    }
}

/// The three anchors. Construction rejects collinear anchors; the equilateral
/// flag is derived from the side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorConfig {
    pub a1: Point2D,
    pub a2: Point2D,
    pub a3: Point2D,
    pub equilateral: bool,
    /// Common side length; only meaningful when `equilateral`.
    pub side: f64,
}

impl AnchorConfig {
    pub fn new(a1: Point2D, a2: Point2D, a3: Point2D) -> Result<Self, GeoError> {
        if !(a1.is_finite() && a2.is_finite() && a3.is_finite()) {
            return Err(GeoError::NonFinite);
        }
        if orientation(a1, a2, a3) == Ordering::Equal {
            return Err(GeoError::CollinearAnchors);
        }
        let (d12, d13, d23) = (a1.dist(a2), a1.dist(a3), a2.dist(a3));
        let equilateral = (d12 - d13).abs() <= EPS_GEO && (d12 - d23).abs() <= EPS_GEO && (d13 - d23).abs() <= EPS_GEO;
        let side = if equilateral { (d12 + d13 + d23) / 3.0 } else { f64::NAN };
        Ok(Self { a1, a2, a3, equilateral, side })
    }

    /// Like [`AnchorConfig::new`] but fails unless the triangle is equilateral.
    pub fn equilateral(a1: Point2D, a2: Point2D, a3: Point2D) -> Result<Self, GeoError> {
        let cfg = Self::new(a1, a2, a3)?;
        if cfg.equilateral {
            Ok(cfg)
        } else {
            Err(GeoError::NotEquilateral)
        }
    }

    /// Equilateral anchors of side `10/sqrt(3)` enclosing the unit square:
    /// `(0.5, 3.5)`, `(0.5 - 5/sqrt(3), -1.5)`, `(0.5 + 5/sqrt(3), -1.5)`.
    pub fn unit_square_default() -> Self {
        let h = 5.0 / 3f64.sqrt();
        Self::equilateral(Point2D::new(0.5, 3.5), Point2D::new(0.5 - h, -1.5), Point2D::new(0.5 + h, -1.5))
            .expect("default anchors are equilateral")
    }

    pub fn anchor(&self, k: OrderIndex) -> Point2D {
        match k.get() {
            1 => self.a1,
            2 => self.a2,
            _ => self.a3,
        }
    }

    pub fn centroid(&self) -> Point2D {
        Point2D::new((self.a1.x + self.a2.x + self.a3.x) / 3.0, (self.a1.y + self.a2.y + self.a3.y) / 3.0)
    }

    /// Barycentric coordinates of `p`; components sum to one.
    pub fn barycentric(&self, p: Point2D) -> [f64; 3] {
        let total = cross(self.a1, self.a2, self.a3);
        [cross(p, self.a2, self.a3) / total, cross(self.a1, p, self.a3) / total, cross(self.a1, self.a2, p) / total]
    }

    /// Signed distance of `p` to each side, positive on the inner side.
    /// Slot `k` is the side opposite anchor `k`.
    pub fn side_distances(&self, p: Point2D) -> [f64; 3] {
        let total = cross(self.a1, self.a2, self.a3);
        let sign = total.signum();
        [
            sign * cross(self.a2, self.a3, p) / self.a2.dist(self.a3),
            sign * cross(self.a3, self.a1, p) / self.a3.dist(self.a1),
            sign * cross(self.a1, self.a2, p) / self.a1.dist(self.a2),
        ]
    }

    /// Closed-triangle membership with tolerance [`EPS_GEO`].
    pub fn contains(&self, p: Point2D) -> bool {
        self.side_distances(p).iter().all(|&d| d >= -EPS_GEO)
    }

    /// Strict interior membership: every side at distance more than [`EPS_GEO`].
    pub fn strictly_contains(&self, p: Point2D) -> bool {
        self.side_distances(p).iter().all(|&d| d > EPS_GEO)
    }

    fn check_inside(&self, p: Point2D) -> Result<(), GeoError> {
        if !p.is_finite() {
            return Err(GeoError::NonFinite);
        }
        if self.contains(p) {
            Ok(())
        } else {
            Err(GeoError::PointOutsideTriangle { x: p.x, y: p.y })
        }
    }
}

/// A node's coordinate triple together with the variant that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VracCoord {
    pub c: [f64; 3],
    pub variant: CoordVariant,
}

impl VracCoord {
    pub fn get(&self, k: OrderIndex) -> f64 {
        self.c[k.slot()]
    }
}

pub fn vrac_euclidean(p: Point2D, anchors: &AnchorConfig) -> Result<VracCoord, GeoError> {
    anchors.check_inside(p)?;
    Ok(VracCoord { c: [p.dist(anchors.a1), p.dist(anchors.a2), p.dist(anchors.a3)], variant: CoordVariant::EuclideanDistance })
}

/// Normalised triangle heights. Requires equilateral anchors.
pub fn vrac_height(p: Point2D, anchors: &AnchorConfig) -> Result<VracCoord, GeoError> {
    if !anchors.equilateral {
        return Err(GeoError::NotEquilateral);
    }
    anchors.check_inside(p)?;
    let h = anchors.side_distances(p).map(|d| d.max(0.0));
    let sum: f64 = h.iter().sum();
    Ok(VracCoord { c: h.map(|v| v / sum), variant: CoordVariant::TriangleHeight })
}

pub fn vrac(p: Point2D, anchors: &AnchorConfig, variant: CoordVariant) -> Result<VracCoord, GeoError> {
    match variant {
        CoordVariant::EuclideanDistance => vrac_euclidean(p, anchors),
        CoordVariant::TriangleHeight => vrac_height(p, anchors),
    }
}

/// A coordinate tagged with the id used for tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub id: NodeId,
    pub coord: VracCoord,
}

impl Site {
    pub fn new(id: NodeId, coord: VracCoord) -> Self {
        Self { id, coord }
    }
}

/// Comparison under `<k` without the variant check. Coordinates within
/// [`EPS_GEO`] of each other fall back to id order.
pub fn order_cmp(k: OrderIndex, a: &Site, b: &Site) -> Ordering {
    let (x, y) = (a.coord.get(k), b.coord.get(k));
    if (x - y).abs() <= EPS_GEO {
        a.id.cmp(&b.id)
    } else if x < y {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn check_variant(a: &Site, b: &Site) -> Result<(), GeoError> {
    if a.coord.variant == b.coord.variant {
        Ok(())
    } else {
        Err(GeoError::VariantMismatch(a.coord.variant, b.coord.variant))
    }
}

/// `a <k b`.
pub fn less(k: OrderIndex, a: &Site, b: &Site) -> Result<bool, GeoError> {
    check_variant(a, b)?;
    Ok(order_cmp(k, a, b) == Ordering::Less)
}

pub(crate) fn tilde_less_unchecked(k: OrderIndex, a: &Site, b: &Site) -> bool {
    let [j, l] = k.others();
    order_cmp(k, a, b) == Ordering::Less && order_cmp(j, b, a) == Ordering::Less && order_cmp(l, b, a) == Ordering::Less
}

/// `a ~<k b`: `a <k b` while `b <j a` for both `j != k`.
pub fn tilde_less(k: OrderIndex, a: &Site, b: &Site) -> Result<bool, GeoError> {
    check_variant(a, b)?;
    Ok(tilde_less_unchecked(k, a, b))
}

/// One of the six sectors around a node `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    /// The greedy region `A_k^x = { z | x ~<k z }`.
    Greedy(OrderIndex),
    /// The region between `A_i^x` and `A_{i+1}^x`: larger than `x` in orders
    /// `i` and `i+1`, smaller in the remaining one.
    Between(OrderIndex),
}

impl Sector {
    /// For a `Between(i)` sector, the order in which `y` is smaller than `x`.
    pub fn receding_order(self) -> Option<OrderIndex> {
        match self {
            Sector::Between(i) => Some(i.prev()),
            Sector::Greedy(_) => None,
        }
    }
}

pub(crate) fn sector_unchecked(x: &Site, y: &Site) -> Option<Sector> {
    if x.id == y.id {
        return None;
    }
    let up = OrderIndex::ALL.map(|k| order_cmp(k, x, y) == Ordering::Less);
    match up.iter().filter(|&&b| b).count() {
        1 => {
            let k = OrderIndex::ALL[up.iter().position(|&b| b)?];
            Some(Sector::Greedy(k))
        }
        2 => {
            let down = OrderIndex::ALL[up.iter().position(|&b| !b)?];
            Some(Sector::Between(down.next()))
        }
        _ => None,
    }
}

/// Which of the six sectors around `x` contains `y`. `None` only for `x == y`
/// or for a pattern excluded inside the anchor triangle.
pub fn sector_of(x: &Site, y: &Site) -> Result<Option<Sector>, GeoError> {
    check_variant(x, y)?;
    Ok(sector_unchecked(x, y))
}

/// The unique `k` with `x ~<k y`, or `None` when `y` lies in an in-between region.
pub fn greedy_region_of(x: &Site, y: &Site) -> Result<Option<OrderIndex>, GeoError> {
    Ok(match sector_of(x, y)? {
        Some(Sector::Greedy(k)) => Some(k),
        _ => None,
    })
}

/// True iff the open segments `p1p2` and `q1q2` share a point other than a
/// common endpoint.
pub fn segments_intersect(p1: Point2D, p2: Point2D, q1: Point2D, q2: Point2D) -> bool {
    let same = |a: Point2D, b: Point2D| a.dist(b) <= EPS_GEO;

    // A shared endpoint leaves only collinear overlap as a possible contact.
    let shared = [(p1, p2, q1, q2), (p1, p2, q2, q1), (p2, p1, q1, q2), (p2, p1, q2, q1)].into_iter().find(|&(c, _, d, _)| same(c, d));
    if let Some((common, a, _, b)) = shared {
        if same(a, b) {
            return true;
        }
        let dot = (a.x - common.x) * (b.x - common.x) + (a.y - common.y) * (b.y - common.y);
        return orientation(common, a, b) == Ordering::Equal && dot > 0.0;
    }

    let d1 = orientation(p1, p2, q1);
    let d2 = orientation(p1, p2, q2);
    let d3 = orientation(q1, q2, p1);
    let d4 = orientation(q1, q2, p2);
    let opposite =
        |a: Ordering, b: Ordering| (a == Ordering::Less && b == Ordering::Greater) || (a == Ordering::Greater && b == Ordering::Less);
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    (d1 == Ordering::Equal && within_box(p1, p2, q1))
        || (d2 == Ordering::Equal && within_box(p1, p2, q2))
        || (d3 == Ordering::Equal && within_box(q1, q2, p1))
        || (d4 == Ordering::Equal && within_box(q1, q2, p2))
}

fn within_box(a: Point2D, b: Point2D, p: Point2D) -> bool {
    p.x >= a.x.min(b.x) - EPS_GEO && p.x <= a.x.max(b.x) + EPS_GEO && p.y >= a.y.min(b.y) - EPS_GEO && p.y <= a.y.max(b.y) + EPS_GEO
}
