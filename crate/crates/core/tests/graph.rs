use gbs_core::corpus;
use gbs_core::graph::{validate_graph, GbsGraph, GraphBuilder, VertexId, ViolationKind};
use proptest::prelude::*;

fn kinds(g: &GbsGraph) -> Vec<ViolationKind> {
    validate_graph(g).violations.iter().map(|v| v.kind).collect()
}

#[test]
fn bundled_graphs_are_valid() {
    for g in [corpus::bs24(), corpus::rose3(2), corpus::rose3(5), corpus::traintrack_graph(2)] {
        assert!(validate_graph(&g).violations.is_empty());
        assert!(validate_graph(&g).is_valid());
    }
}

#[test]
fn betti_numbers() {
    assert_eq!(corpus::bs24().betti_number().unwrap(), 1);
    assert_eq!(corpus::rose3(2).betti_number().unwrap(), 3);
    assert_eq!(corpus::traintrack_graph(2).betti_number().unwrap(), 3);
}

#[test]
fn bs24_stats() {
    let s = corpus::bs24().stats();
    assert_eq!(s.volume, 1.0);
    assert_eq!(s.big_vertex_count, 1);
    assert!(s.collapsible_edges.is_empty());
}

#[test]
fn traintrack_stats() {
    let s = corpus::traintrack_graph(2).stats();
    assert_eq!(s.volume, 4.0);
    assert_eq!(s.big_vertex_count, 0);
    assert_eq!(s.collapsible_edges, vec!["eb", "ee", "ef"]);
}

#[test]
fn label_conventions() {
    let g = corpus::bs24();
    let t = g.edge_by_name("t").unwrap();
    assert_eq!(g.label(t), 2);
    assert_eq!(g.origin_label(t), 4);
    assert_eq!(g.label(g.rev(t)), 4);
}

#[test]
fn zero_label_and_bad_length_are_reported() {
    let mut b = GraphBuilder::new();
    let v = b.vertex("v");
    b.edge("e", "E", v, v, 0, 2, -1.0);
    let k = kinds(&b.build_unchecked());
    assert!(k.contains(&ViolationKind::ZeroLabel));
    assert!(k.contains(&ViolationKind::NonPositiveLength));
}

#[test]
fn disconnected_and_duplicate_names_are_reported() {
    let mut b = GraphBuilder::new();
    let v = b.vertex("v");
    let w = b.vertex("v");
    b.edge("e", "E", v, v, 1, 2, 1.0);
    b.edge("f", "F", w, w, 1, 2, 1.0);
    let k = kinds(&b.build_unchecked());
    assert!(k.contains(&ViolationKind::DuplicateName));
    assert!(k.contains(&ViolationKind::Disconnected));
    assert!(GraphBuilder::new().build().is_err());
}

fn bs12() -> GbsGraph {
    let mut b = GraphBuilder::new();
    let a = b.vertex("a");
    b.edge("t", "T", a, a, 1, 2, 1.0);
    b.build().unwrap()
}

#[test]
fn solvable_circle_warns() {
    let r = validate_graph(&bs12());
    assert!(r.violations.is_empty());
    assert_eq!(r.warnings.len(), 1);
    assert!(validate_graph(&corpus::bs24()).warnings.is_empty());
}

#[test]
fn normalize_is_idempotent() {
    let g = corpus::traintrack_graph(2).normalized();
    assert!((g.volume() - 1.0).abs() < 1e-15);
    assert_eq!(g.normalized(), g);
}

proptest! {
    #[test]
    fn normalized_volume_is_one(lens in proptest::collection::vec(0.01f64..100.0, 4)) {
        let g = corpus::traintrack_graph(3);
        let ids: Vec<_> = g.unoriented_edges().collect();
        let h = g.with_lengths(|e| lens[ids.iter().position(|&x| x == e).unwrap()]).normalized();
        prop_assert!((h.volume() - 1.0).abs() < 1e-12);
        prop_assert!(validate_graph(&h).violations.is_empty());
        for e in h.edges() {
            prop_assert_eq!(h.length(e), h.length(h.rev(e)));
        }
    }

    #[test]
    fn rose_betti_and_reverse_involution(n in 2i64..9) {
        let g = corpus::rose3(n);
        prop_assert_eq!(g.betti_number().unwrap(), 3);
        for e in g.edges() {
            prop_assert_eq!(g.rev(g.rev(e)), e);
            prop_assert_eq!(g.origin(g.rev(e)), g.terminus(e));
            prop_assert_eq!(g.terminus(e), VertexId(0));
        }
    }
}
