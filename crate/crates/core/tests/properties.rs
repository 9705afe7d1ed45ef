mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropmod_core::cone::{fiber, product_dist, separation, CirclePoint, ConeMode, ExtendedPoint, Length};
use tropmod_core::contraction::{betti_decomposition, contract};
use tropmod_core::io::{graph_to_json, parse_graph, parse_point, point_to_json};
use tropmod_core::iso::{are_isomorphic, canonical_form};
use tropmod_core::{EdgeSet, WeightedGraph};

use common::{brute_isomorphic, scratch_genus, shuffled};

fn graphs() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=4).prop_flat_map(|v| {
        (
            prop::collection::vec(0u32..=1, v),
            prop::collection::vec(any::<prop::sample::Index>(), v - 1),
            prop::collection::vec((0..v, 0..v), 0..=3),
            prop::collection::vec(0..v, 0..=3),
        )
            .prop_map(|(weights, parents, extra, leaves)| {
                let mut edges: Vec<(usize, usize)> =
                    parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                edges.extend(extra);
                WeightedGraph::from_indices(&weights, &edges, &leaves).unwrap()
            })
    })
}

fn with_subsets(k: usize) -> impl Strategy<Value = (WeightedGraph, Vec<EdgeSet>)> {
    graphs().prop_flat_map(move |g| {
        let full = g.all_edges().0;
        let sets = prop::collection::vec((0..=full).prop_map(move |m| EdgeSet(m & full)), k);
        (Just(g), sets)
    })
}

fn lengths() -> impl Strategy<Value = Length> {
    prop_oneof![
        1 => Just(Length::Infinite),
        1 => Just(Length::Finite(BigRational::from_integer(BigInt::from(0)))),
        6 => (0u32..12, 1u32..5).prop_map(|(a, b)| Length::Finite(BigRational::new(a.into(), b.into()))),
    ]
}

fn points(g: WeightedGraph, count: usize) -> impl Strategy<Value = Vec<ExtendedPoint>> {
    let base = Arc::new(g);
    let e = base.num_edges();
    prop::collection::vec(prop::collection::vec(lengths(), e), count).prop_map(move |all| {
        all.iter()
            .map(|ls| {
                let coords = ls.iter().map(CirclePoint::from_length).collect();
                ExtendedPoint::new(base.clone(), coords, ConeMode::Compactified).unwrap()
            })
            .collect()
    })
}

fn theta_points(count: usize) -> impl Strategy<Value = Vec<ExtendedPoint>> {
    prop_oneof![
        Just(tropmod_core::graph::samples::theta()),
        Just(tropmod_core::graph::samples::dumbbell()),
    ]
    .prop_flat_map(move |g| points(g, count))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn contraction_keeps_genus_and_leaves((g, qs) in with_subsets(1)) {
        let c = contract(&g, qs[0]).unwrap();
        prop_assert_eq!(c.result.genus(), g.genus());
        prop_assert_eq!(scratch_genus(&c.result), scratch_genus(&g));
        prop_assert_eq!(c.result.num_leaves(), g.num_leaves());
        prop_assert_eq!(c.result.num_edges(), g.num_edges() - qs[0].len());
        if g.is_stable() {
            prop_assert!(c.result.is_stable());
        }
    }

    #[test]
    fn betti_splits_over_contraction((g, qs) in with_subsets(1)) {
        let c = contract(&g, qs[0]).unwrap();
        let d = betti_decomposition(&c).unwrap();
        prop_assert_eq!(g.betti(), d.contracted + d.removed);
        prop_assert_eq!(d.per_vertex.iter().sum::<usize>(), d.removed);
        prop_assert_eq!(d.removed, g.betti_of(qs[0]));
    }

    #[test]
    fn contractions_compose((g, qs) in with_subsets(2)) {
        let (a, b) = (qs[0], qs[1].difference(qs[0]));
        let first = contract(&g, a).unwrap();
        let twice = contract(&first.result, first.image_of(b)).unwrap();
        let once = contract(&g, a.union(b)).unwrap();
        prop_assert!(brute_isomorphic(&twice.result, &once.result));
        prop_assert_eq!(canonical_form(&twice.result).unwrap(), canonical_form(&once.result).unwrap());
    }

    #[test]
    fn canonical_form_ignores_labels(g in graphs(), seed in any::<prop::sample::Index>()) {
        let n = g.num_vertices();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed.index(n));
        let h = shuffled(&g, &perm);
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        prop_assert!(are_isomorphic(&g, &h).unwrap().is_some());
    }

    #[test]
    fn isomorphism_matches_oracle(g in graphs(), h in graphs()) {
        let ours = are_isomorphic(&g, &h).unwrap();
        prop_assert_eq!(ours.is_some(), brute_isomorphic(&g, &h));
        if let Some(phi) = ours {
            prop_assert!(phi.verify(&g, &h));
        }
    }

    #[test]
    fn graph_json_round_trips(g in graphs()) {
        let text = graph_to_json(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_json(&back), text);
    }

    #[test]
    fn length_text_round_trips(x in lengths()) {
        let back: Length = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn point_json_round_trips(ps in theta_points(1)) {
        let text = point_to_json(&ps[0]);
        prop_assert_eq!(&parse_point(&text).unwrap(), &ps[0]);
    }

    #[test]
    fn product_distance_is_a_metric(ps in theta_points(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        if p.base() != q.base() || q.base() != r.base() {
            return Ok(());
        }
        let pq = product_dist(p, q).unwrap();
        prop_assert_eq!(&pq, &product_dist(q, p).unwrap());
        prop_assert_eq!(pq.is_zero(), p.coords() == q.coords());
        let pr = product_dist(p, r).unwrap().gap;
        let qr = product_dist(q, r).unwrap().gap;
        prop_assert!(pr <= &pq.gap + &qr);
        let half = BigRational::new(1.into(), 2.into());
        prop_assert!(pq.gap <= half);
    }

    #[test]
    fn fibers_are_classes(ps in theta_points(1)) {
        let p = &ps[0];
        let f = fiber(p).unwrap();
        prop_assert!(f.contains(p));
        for other in &f {
            let g = fiber(other).unwrap();
            prop_assert_eq!(g.len(), f.len());
            prop_assert!(f.iter().all(|x| g.contains(x)));
            prop_assert!(separation(p, other).unwrap().is_zero());
        }
    }
}
