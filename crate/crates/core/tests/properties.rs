use std::collections::BTreeMap;

use gbs_core::format::{from_file, to_file};
use gbs_core::model::EdgeSpec;
use gbs_core::moves::{is_reduced, legal_slides, reduce};
use gbs_core::shelters::{labeling_of, surviving_edges, surviving_edges_by_reduction};
use gbs_core::{canonical_form, modular_image, EdgeId, GbsGraph, VertexId};
use num_bigint::BigInt;
use proptest::prelude::*;

fn label() -> impl Strategy<Value = i64> {
    prop_oneof![Just(1i64), Just(-1), 2i64..=6, -6i64..=-2]
}

/// Connected graphs on up to 4 vertices with up to 5 edges: edge `i < n-1`
/// joins vertex `i+1` to an earlier vertex, the rest are arbitrary.
fn graph() -> impl Strategy<Value = GbsGraph> {
    (1u32..=4).prop_flat_map(|n| {
        let tree = (1..n).map(|i| {
            (0..i, label(), label(), any::<bool>()).prop_map(
                move |(a, la, lb, flip)| {
                    if flip {
                        (i, lb, a, la)
                    } else {
                        (a, la, i, lb)
                    }
                },
            )
        });
        let tree: Vec<_> = tree.collect();
        let extra =
            prop::collection::vec((0..n, label(), 0..n, label()), usize::from(n == 1)..=(5 - (n as usize - 1)).min(3));
        (tree, extra).prop_map(|(t, e)| {
            let edges: Vec<(u32, i64, u32, i64)> = t.into_iter().chain(e).collect();
            GbsGraph::from_edges(&edges).unwrap()
        })
    })
}

/// The same graph with vertices and edges renamed by the given shifts and
/// every edge listed in reverse.
fn relabel(g: &GbsGraph, vshift: u32, eshift: u32) -> GbsGraph {
    let n = g.vertex_count() as u32;
    let rename: BTreeMap<VertexId, VertexId> =
        g.vertices().iter().enumerate().map(|(i, &v)| (v, VertexId((i as u32 + vshift) % n + 10))).collect();
    let specs: Vec<EdgeSpec> = g
        .edge_specs()
        .into_iter()
        .map(|(id, [(a, la), (b, lb)])| (EdgeId(id.0 + eshift), [(rename[&b], lb), (rename[&a], la)]))
        .collect();
    let vs: Vec<VertexId> = rename.values().copied().collect();
    GbsGraph::new(&vs, &specs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn file_round_trip(g in graph()) {
        prop_assert_eq!(from_file(&to_file(&g)).unwrap().graph, g);
    }

    #[test]
    fn canonical_form_ignores_names_and_orientation(g in graph(), vs in 0u32..4, es in 0u32..7) {
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&relabel(&g, vs, es)).unwrap());
    }

    #[test]
    fn flipping_all_labels_at_a_vertex_is_invisible(g in graph(), pick in 0usize..4) {
        let v = g.vertices()[pick % g.vertex_count()];
        let specs: Vec<EdgeSpec> = g
            .edge_specs()
            .into_iter()
            .map(|(id, ends)| (id, ends.map(|(w, l)| if w == v { (w, -l) } else { (w, l) })))
            .collect();
        let h = GbsGraph::new(g.vertices(), &specs).unwrap();
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn slides_keep_shape_and_invariants(g in graph()) {
        for mv in legal_slides(&g) {
            let h = mv.apply(&g).unwrap();
            prop_assert_eq!(h.graph.vertex_count(), g.vertex_count());
            prop_assert_eq!(h.graph.edge_count(), g.edge_count());
            prop_assert!(modular_image(&g).same_subgroup(&modular_image(&h.graph)));
            let back = h.inverse.apply(&h.graph).unwrap();
            prop_assert_eq!(canonical_form(&back.graph).unwrap(), canonical_form(&g).unwrap());
        }
    }

    #[test]
    fn reduce_gives_reduced_graph_in_same_space(g in graph()) {
        let (r, moves) = reduce(&g);
        prop_assert!(is_reduced(&r) || r.edge_count() == 1);
        prop_assert_eq!(r.betti(), g.betti());
        prop_assert!(modular_image(&g).same_subgroup(&modular_image(&r)));
        prop_assert_eq!(moves.len(), g.edge_count() - r.edge_count());
    }

    #[test]
    fn shelters_agree_with_definition_when_defined(g in graph()) {
        let l = labeling_of(&g);
        if let Ok(s) = surviving_edges(&l) {
            prop_assert_eq!(s, surviving_edges_by_reduction(&l));
        }
    }

    #[test]
    fn big_labels_round_trip(exp in 19u32..40, sign in any::<bool>()) {
        let big = BigInt::from(3).pow(exp) * if sign { -1 } else { 1 };
        let g = GbsGraph::new(&[VertexId(0)], &[(EdgeId(0), [(VertexId(0), BigInt::from(1)), (VertexId(0), big)])]).unwrap();
        prop_assert_eq!(from_file(&to_file(&g)).unwrap().graph, g);
    }
}
