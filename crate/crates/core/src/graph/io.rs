//! Line-oriented text formats for graphs and edge sets.
//!
//! Graph file: a header line
//! `n r ax1 ay1 ax2 ay2 ax3 ay3 variant seed` followed by `n` lines `id x y`.
//! `variant` is `height` or `euclidean`; `seed` is an integer or `-`.
//!
//! Edge file: one line per directed edge, `from to order kind path...`, where
//! `kind` is `real` or `virtual` and `path` lists the node ids of the
//! underlying radio path from `from` to `to`.
//!
//! In both formats blank lines and lines starting with `#` are ignored. Reals
//! are written in shortest round-trip form, so a write/read cycle is exact.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::{DirectedEdge, DirectedEdgeSet, EdgeKind, GraphError, NodeId, UnitDiskGraph};
use crate::geometry::{AnchorConfig, CoordVariant, OrderIndex, Point2D};

pub fn format_graph(g: &UnitDiskGraph) -> String {
    let a = g.anchors();
    let seed = g.seed().map_or_else(|| "-".to_owned(), |s| s.to_string());
    let mut out =
        format!("{} {} {} {} {} {} {} {} {} {}\n", g.len(), g.radius(), a.a1.x, a.a1.y, a.a2.x, a.a2.y, a.a3.x, a.a3.y, g.variant(), seed);
    for n in g.nodes() {
        let _ = writeln!(out, "{} {} {}", n.id, n.pos.x, n.pos.y);
    }
    out
}

pub fn write_graph<W: Write>(g: &UnitDiskGraph, mut w: W) -> Result<(), GraphError> {
    w.write_all(format_graph(g).as_bytes())?;
    Ok(())
}

fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String), GraphError>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i + 1, t.to_owned())))
        }
    })
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("bad {what} `{tok}`") })
}

pub fn read_graph<R: BufRead>(r: R) -> Result<UnitDiskGraph, GraphError> {
    let mut lines = content_lines(r);
    let (hl, header) = lines.next().ok_or(GraphError::Parse { line: 0, msg: "missing header".into() })??;
    let mut t = header.split_whitespace();
    let n: usize = field(t.next(), hl, "node count")?;
    let radius: f64 = field(t.next(), hl, "radius")?;
    let mut coords = [0.0; 6];
    for c in &mut coords {
        *c = field(t.next(), hl, "anchor coordinate")?;
    }
    let variant: CoordVariant = field(t.next(), hl, "variant")?;
    let seed = match t.next() {
        None | Some("-") => None,
        Some(s) => Some(field::<u64>(Some(s), hl, "seed")?),
    };
    let anchors =
        AnchorConfig::new(Point2D::new(coords[0], coords[1]), Point2D::new(coords[2], coords[3]), Point2D::new(coords[4], coords[5]))
            .map_err(|e| GraphError::Parse { line: hl, msg: e.to_string() })?;

    let mut points = Vec::with_capacity(n);
    for item in lines {
        let (ln, l) = item?;
        let mut t = l.split_whitespace();
        let id: u32 = field(t.next(), ln, "node id")?;
        let x: f64 = field(t.next(), ln, "x")?;
        let y: f64 = field(t.next(), ln, "y")?;
        points.push((NodeId(id), Point2D::new(x, y)));
    }
    if points.len() != n {
        return Err(GraphError::Parse { line: hl, msg: format!("header announces {n} nodes, found {}", points.len()) });
    }
    let g = UnitDiskGraph::new(points, radius, anchors, variant)?;
    Ok(match seed {
        Some(s) => g.with_seed(s),
        None => g,
    })
}

pub fn format_edges(edges: &DirectedEdgeSet) -> String {
    let mut out = String::new();
    for e in edges {
        let kind = match e.kind {
            EdgeKind::Real => "real",
            EdgeKind::Virtual => "virtual",
        };
        let _ = write!(out, "{} {} {} {}", e.from, e.to, e.order, kind);
        for id in &e.underlying_path {
            let _ = write!(out, " {id}");
        }
        out.push('\n');
    }
    out
}

pub fn write_edges<W: Write>(edges: &DirectedEdgeSet, mut w: W) -> Result<(), GraphError> {
    w.write_all(format_edges(edges).as_bytes())?;
    Ok(())
}

pub fn read_edges<R: BufRead>(r: R) -> Result<DirectedEdgeSet, GraphError> {
    let mut set = DirectedEdgeSet::new();
    for item in content_lines(r) {
        let (ln, l) = item?;
        let mut t = l.split_whitespace();
        let from = NodeId(field(t.next(), ln, "from")?);
        let to = NodeId(field(t.next(), ln, "to")?);
        let order: u8 = field(t.next(), ln, "order")?;
        let order = OrderIndex::new(order).map_err(|e| GraphError::Parse { line: ln, msg: e.to_string() })?;
        let kind = match t.next() {
            Some("real") => EdgeKind::Real,
            Some("virtual") => EdgeKind::Virtual,
            other => return Err(GraphError::Parse { line: ln, msg: format!("bad edge kind {other:?}") }),
        };
        let path = t
            .map(|s| s.parse::<u32>().map(NodeId).map_err(|_| GraphError::Parse { line: ln, msg: format!("bad path id `{s}`") }))
            .collect::<Result<Vec<_>, _>>()?;
        if path.first() != Some(&from) || path.last() != Some(&to) {
            return Err(GraphError::Parse { line: ln, msg: "path must run from `from` to `to`".into() });
        }
        set.insert(DirectedEdge { from, to, order, kind, underlying_path: path })?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random_udg, half_theta6, Rect};

    #[test]
    fn graph_text_round_trip() {
        let g = generate_random_udg(40, 0.2, Rect::UNIT, AnchorConfig::unit_square_default(), CoordVariant::TriangleHeight, 3).unwrap();
        let text = format_graph(&g);
        let back = read_graph(text.as_bytes()).unwrap();
        assert_eq!(back.nodes(), g.nodes());
        assert_eq!(back.radius(), g.radius());
        assert_eq!(back.seed(), Some(3));
        assert_eq!(format_graph(&back), text);
    }

    #[test]
    fn edge_text_round_trip() {
        let g = generate_random_udg(30, 0.2, Rect::UNIT, AnchorConfig::unit_square_default(), CoordVariant::TriangleHeight, 4).unwrap();
        let mut edges = half_theta6(&g);
        // add a virtual edge on a fresh slot to cover the path syntax
        let mut extra = DirectedEdgeSet::new();
        extra.insert(DirectedEdge::virtual_edge(OrderIndex::ONE, vec![NodeId(100), NodeId(101), NodeId(102)])).unwrap();
        for e in &extra {
            edges.insert(e.clone()).unwrap();
        }
        let back = read_edges(format_edges(&edges).as_bytes()).unwrap();
        assert_eq!(back, edges);
    }

    #[test]
    fn comments_and_errors() {
        let text = "# a comment\n1 0.1 0.5 3.5 -2.386751345948129 -1.5 3.386751345948129 -1.5 height -\n\n0 0.5 0.5\n";
        let g = read_graph(text.as_bytes()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.seed(), None);

        let short = "2 0.1 0.5 3.5 -2.386751345948129 -1.5 3.386751345948129 -1.5 height 1\n0 0.5 0.5\n";
        assert!(matches!(read_graph(short.as_bytes()), Err(GraphError::Parse { .. })));
        assert!(matches!(read_edges("0 1 4 real 0 1\n".as_bytes()), Err(GraphError::Parse { .. })));
        assert!(matches!(read_edges("0 1 1 bogus 0 1\n".as_bytes()), Err(GraphError::Parse { .. })));
    }
}
