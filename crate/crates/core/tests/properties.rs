mod common;

use proptest::prelude::*;

use vrac_spanner::geometry::{
    greedy_region_of, less, order_cmp, segments_intersect, tilde_less, vrac, vrac_height, AnchorConfig, CoordVariant, OrderIndex, Point2D,
    Site,
};
use vrac_spanner::graph::{check_planarity, half_theta6, shortest_path_length, EdgeKind, EdgeSetView, Metric};
use vrac_spanner::harness::{run_experiment, write_csv, ExperimentConfig};
use vrac_spanner::planarizer::{
    build_gtilde, build_gtilde_prime, build_gtilde_prime_euclidean_announce, capped_edge_factor, edge_descent_path, path_length,
    virtual_edge_factor,
};
use vrac_spanner::NodeId;

use common::*;

const EPS: f64 = 1e-9;

fn unit_pt() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.0f64, 0.0..1.0f64)
}

fn variant() -> impl Strategy<Value = CoordVariant> {
    prop_oneof![Just(CoordVariant::TriangleHeight), Just(CoordVariant::EuclideanDistance)]
}

fn site(id: u32, p: (f64, f64), v: CoordVariant) -> Site {
    Site::new(NodeId(id), vrac(Point2D::new(p.0, p.1), &AnchorConfig::unit_square_default(), v).unwrap())
}

fn far_apart(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).hypot(a.1 - b.1) > 1e-6
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn segments_match_exact_oracle(
        p1 in (-6i64..6, -6i64..6), p2 in (-6i64..6, -6i64..6),
        q1 in (-6i64..6, -6i64..6), q2 in (-6i64..6, -6i64..6),
    ) {
        prop_assume!(p1 != p2 && q1 != q2);
        let f = |p: (i64, i64)| Point2D::new(p.0 as f64 * 0.1, p.1 as f64 * 0.1);
        prop_assert_eq!(segments_intersect(f(p1), f(p2), f(q1), f(q2)), segments_cross_exact(p1, p2, q1, q2));
        prop_assert_eq!(segments_intersect(f(q1), f(q2), f(p1), f(p2)), segments_intersect(f(p1), f(p2), f(q1), f(q2)));
    }

    #[test]
    fn heights_are_area_ratios(p in unit_pt()) {
        let a = AnchorConfig::unit_square_default();
        let pt = Point2D::new(p.0, p.1);
        let c = vrac_height(pt, &a).unwrap().c;
        let o = height_by_area(pt, &a);
        for k in 0..3 {
            prop_assert!((c[k] - o[k]).abs() < 1e-12, "{:?} vs {:?}", c, o);
        }
        prop_assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_regions_are_sixty_degree_cones(x in unit_pt(), y in unit_pt()) {
        prop_assume!(far_apart(x, y));
        let a = AnchorConfig::unit_square_default();
        let oracle = cone_oracle(Point2D::new(x.0, x.1), Point2D::new(y.0, y.1), &a);
        prop_assume!(oracle.is_some());
        let v = CoordVariant::TriangleHeight;
        prop_assert_eq!(greedy_region_of(&site(0, x, v), &site(1, y, v)).unwrap(), oracle.unwrap());
    }

    #[test]
    fn no_pair_dominates_in_all_orders(a in unit_pt(), b in unit_pt(), v in variant()) {
        prop_assume!(far_apart(a, b));
        let (sa, sb) = (site(0, a, v), site(1, b, v));
        prop_assert!(!OrderIndex::ALL.iter().all(|&k| less(k, &sa, &sb).unwrap()));
        prop_assert!(!OrderIndex::ALL.iter().all(|&k| less(k, &sb, &sa).unwrap()));
        // exactly one of the two sees the other in a greedy region
        let fwd = OrderIndex::ALL.iter().filter(|&&k| tilde_less(k, &sa, &sb).unwrap()).count();
        let back = OrderIndex::ALL.iter().filter(|&&k| tilde_less(k, &sb, &sa).unwrap()).count();
        prop_assert_eq!(fwd + back, 1);
    }

    #[test]
    fn orders_are_total(a in unit_pt(), b in unit_pt(), c in unit_pt(), v in variant()) {
        let s = [site(0, a, v), site(1, b, v), site(2, c, v)];
        for k in OrderIndex::ALL {
            for i in 0..3 {
                prop_assert!(order_cmp(k, &s[i], &s[i]).is_eq());
                for j in 0..3 {
                    prop_assert_eq!(order_cmp(k, &s[i], &s[j]), order_cmp(k, &s[j], &s[i]).reverse());
                }
            }
            let mut sorted = s.to_vec();
            sorted.sort_by(|x, y| order_cmp(k, x, y));
            prop_assert!(sorted.windows(2).all(|w| order_cmp(k, &w[0], &w[1]).is_lt()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shortest_paths_match_enumeration(pts in prop::collection::vec(unit_pt(), 2..10), r in 0.2..0.6f64) {
        let g = graph(&pts, r, CoordVariant::TriangleHeight);
        let pos: Vec<Point2D> = g.nodes().iter().map(|n| n.pos).collect();
        let adj = udg_adjacency(&pos, r);
        for s in 0..pos.len() {
            for t in 0..pos.len() {
                let want = exhaustive_shortest(&pos, &adj, s, t);
                let len = shortest_path_length(&g, NodeId(s as u32), NodeId(t as u32), Metric::EuclideanLength).unwrap();
                let hops = shortest_path_length(&g, NodeId(s as u32), NodeId(t as u32), Metric::HopCount).unwrap();
                prop_assert_eq!(len, want.map(|w| w.0));
                prop_assert_eq!(hops, want.map(|w| w.1 as f64));
            }
        }
    }

    #[test]
    fn overlay_structure(pts in prop::collection::vec(unit_pt(), 2..60), r in 0.08..0.35f64) {
        let g = graph(&pts, r, CoordVariant::TriangleHeight);
        let (o, ledger) = build_gtilde_prime(&g).unwrap();
        o.edges().validate(&g).unwrap();
        prop_assert!(check_planarity(&g, o.edges()).unwrap().is_empty());
        let theta = half_theta6(&g);
        prop_assert!(check_planarity(&g, &theta).unwrap().is_empty());
        for e in o.edges() {
            prop_assert_eq!(theta.out_edge(e.from, e.order).map(|t| t.to), Some(e.to));
            if e.kind == EdgeKind::Virtual {
                prop_assert_eq!(e.underlying_path.len(), 3);
                prop_assert!(g.dist(e.from, e.to).unwrap() <= virtual_edge_factor() * r + EPS);
            }
        }
        prop_assert!(ledger.ids_broadcast <= 6 * g.len());
        let (_, l2) = build_gtilde_prime_euclidean_announce(&g).unwrap();
        prop_assert!(l2.ids_broadcast <= 3 * g.len());
        if o.virtual_count() == 0 {
            prop_assert_eq!(l2.ids_broadcast, 0);
        }

        let capped = build_gtilde(&g, true);
        prop_assert!(check_planarity(&g, capped.edges()).unwrap().is_empty());
        for e in capped.edges() {
            prop_assert!(g.dist(e.from, e.to).unwrap() <= capped_edge_factor() * r + EPS);
        }
    }

    #[test]
    fn every_radio_link_has_a_short_monotone_overlay_path(pts in prop::collection::vec(unit_pt(), 2..60), r in 0.08..0.35f64) {
        let g = graph(&pts, r, CoordVariant::TriangleHeight);
        let (o, _) = build_gtilde_prime(&g).unwrap();
        let view = EdgeSetView::new(&g, o.edges()).unwrap();
        for (a, b) in g.edges() {
            let (x, y) = (g.at(a).id, g.at(b).id);
            let bound = 2.0 * g.dist(x, y).unwrap() + EPS;
            let path = edge_descent_path(&o, x, y).expect("descent path exists");
            prop_assert_eq!((path[0], *path.last().unwrap()), (x, y));
            prop_assert!(path_length(&g, &path).unwrap() <= bound);
            let coords: Vec<[f64; 3]> = path.iter().map(|&id| g.node(id).unwrap().coord.c).collect();
            let monotone = (0..3).any(|k| {
                coords.windows(2).all(|w| w[0][k] <= w[1][k] + EPS) || coords.windows(2).all(|w| w[0][k] + EPS >= w[1][k])
            });
            prop_assert!(monotone, "path {:?} not monotone in any coordinate", path);
            let sp = shortest_path_length(&view, x, y, Metric::EuclideanLength).unwrap().unwrap();
            prop_assert!(sp <= bound);
        }
    }
}

#[test]
fn csv_output_is_deterministic() {
    let cfg =
        ExperimentConfig { n: 60, r_values: vec![0.15, 0.25], trials_per_r: 6, route_samples_per_trial: 5, ..ExperimentConfig::default() };
    let render = || {
        let mut buf = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(render(), render());
}
