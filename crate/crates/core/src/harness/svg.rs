use std::fmt::Write as _;
use std::path::Path;

use super::HarnessError;
use crate::geometry::Point2D;
use crate::graph::{EdgeKind, UnitDiskGraph};
use crate::planarizer::PlanarOverlay;
use crate::routing::RouteTrace;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct Frame {
    min: Point2D,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(g: &UnitDiskGraph) -> Self {
        if g.is_empty() {
            return Frame { min: Point2D::new(0.0, 0.0), scale: CANVAS, height: 1.0 };
        }
        let (mut lo, mut hi) = (Point2D::new(f64::INFINITY, f64::INFINITY), Point2D::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for n in g.nodes() {
            lo = Point2D::new(lo.x.min(n.pos.x), lo.y.min(n.pos.y));
            hi = Point2D::new(hi.x.max(n.pos.x), hi.y.max(n.pos.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Frame { min: lo, scale: CANVAS / span, height: hi.y - lo.y }
    }

    fn map(&self, p: Point2D) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.scale, MARGIN + (self.height - (p.y - self.min.y)) * self.scale)
    }
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), style: &str) {
    let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#, a.0, a.1, b.0, b.1);
}

/// SVG drawing: nodes as dots, real edges solid, virtual edges green with
/// their relay path dashed, and the route (if any) in red.
pub fn svg_document(g: &UnitDiskGraph, overlay: &PlanarOverlay<'_>, trace: Option<&RouteTrace>) -> String {
    let f = Frame::new(g);
    let size = CANVAS + 2.0 * MARGIN;
    let pos = |id| f.map(g.pos(id).expect("overlay and route nodes belong to the graph"));
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    out.push_str("<g id=\"edges\">\n");
    for e in overlay.edges() {
        match e.kind {
            EdgeKind::Real => line(&mut out, pos(e.from), pos(e.to), r##"stroke="#333" stroke-width="1""##),
            EdgeKind::Virtual => {
                for w in e.underlying_path.windows(2) {
                    line(&mut out, pos(w[0]), pos(w[1]), r##"stroke="#8a8" stroke-width="1" stroke-dasharray="4 3""##);
                }
                line(&mut out, pos(e.from), pos(e.to), r##"class="virtual" stroke="#1a9e1a" stroke-width="2.5""##);
            }
        }
    }
    out.push_str("</g>\n");

    if let Some(t) = trace {
        let pts: Vec<String> = t
            .nodes()
            .into_iter()
            .map(|id| {
                let (x, y) = pos(id);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline id="route" points="{}" fill="none" stroke="#d62728" stroke-width="3" stroke-opacity="0.8"/>"##,
            pts.join(" ")
        );
    }

    out.push_str("<g id=\"nodes\">\n");
    for n in g.nodes() {
        let (x, y) = f.map(n.pos);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"><title>{}</title></circle>"#, n.id);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn render_svg(g: &UnitDiskGraph, overlay: &PlanarOverlay<'_>, trace: Option<&RouteTrace>, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, svg_document(g, overlay, trace)).map_err(|source| HarnessError::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AnchorConfig, CoordVariant};
    use crate::planarizer::build_gtilde_prime;
    use crate::routing::{route_zigzag, RouterConfig};
    use crate::NodeId;

    fn graph(points: &[(f64, f64)], r: f64) -> UnitDiskGraph {
        let pts = points.iter().enumerate().map(|(i, &(x, y))| (NodeId(i as u32), Point2D::new(x, y))).collect();
        UnitDiskGraph::new(pts, r, AnchorConfig::unit_square_default(), CoordVariant::TriangleHeight).unwrap()
    }

    #[test]
    fn empty_graph_is_valid_document() {
        let g = graph(&[], 0.1);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let doc = svg_document(&g, &o, None);
        assert!(doc.starts_with("<svg") && doc.ends_with("</svg>\n"));
        assert!(!doc.contains("<line") && !doc.contains("<circle"));
    }

    #[test]
    fn virtual_edge_and_route_drawn() {
        let g = graph(&[(0.5, 0.5), (0.54, 0.588), (0.45, 0.5875)], 0.1);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let tr = route_zigzag(&o, NodeId(0), NodeId(2), RouterConfig::for_graph(&g)).unwrap();
        let doc = svg_document(&g, &o, Some(&tr));
        assert_eq!(doc.matches(r#"class="virtual""#).count(), 1);
        assert_eq!(doc.matches("stroke-dasharray").count(), 2);
        assert!(doc.contains(r#"id="route""#));
        assert_eq!(doc.matches("<circle").count(), 3);
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = graph(&[(0.2, 0.3), (0.25, 0.35), (0.3, 0.3), (0.7, 0.9)], 0.1);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
        render_svg(&g, &o, None, &a).unwrap();
        render_svg(&g, &o, None, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert!(render_svg(&g, &o, None, Path::new("/nonexistent-dir/x.svg")).is_err());
    }
}
