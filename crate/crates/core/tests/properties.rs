use proptest::prelude::*;

use union_subgraph::descriptors::{
    coefficient_table, path_matrix, reconstruct_subgraph, DescriptorKind, EncodingKind,
};
use union_subgraph::graph::Graph;
use union_subgraph::neural::{DenseTensor, GraphContext, Layer, Mlp, MpLayer, SoftmaxAxis, Trans};
use union_subgraph::substructure::{
    classify_edge_types, max_anchor_distance, overlap_subgraph, union_minus_subgraph,
    union_subgraph,
};
use union_subgraph::wl::{augmented_refine, distinguish_pair, wl_distinguishable, wl_refine};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (2..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

fn graph_with_edge(max_nodes: usize) -> impl Strategy<Value = (Graph, (usize, usize))> {
    graph(max_nodes)
        .prop_filter("needs an edge", |g| g.num_edges() > 0)
        .prop_flat_map(|g| {
            let m = g.num_edges();
            (Just(g), 0..m)
        })
        .prop_map(|(g, i)| {
            let e = g.edges()[i];
            (g, e)
        })
}

fn graph_and_perm(max_nodes: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_nodes).prop_flat_map(|g| {
        let ids: Vec<usize> = (0..g.num_nodes()).collect();
        (Just(g), Just(ids).prop_shuffle())
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_ignore_node_labels((g, perm) in graph_and_perm(9)) {
        let h = g.permuted(&perm).unwrap();
        for kind in DescriptorKind::per_edge_kinds() {
            let a = coefficient_table(&g, kind, EncodingKind::SvdSum).unwrap();
            let b = coefficient_table(&h, kind, EncodingKind::SvdSum).unwrap();
            for &(x, y) in g.edges() {
                let before = a.raw(x, y).unwrap();
                let after = b.raw(perm[x], perm[y]).unwrap();
                prop_assert!((before - after).abs() <= 1e-9, "{kind:?}: {before} vs {after}");
            }
        }
    }

    #[test]
    fn path_matrix_round_trips((g, (v, u)) in graph_with_edge(10)) {
        let s = union_subgraph(&g, v, u).unwrap();
        let p = path_matrix(&s).unwrap();
        prop_assert!(p.max_entry() <= 3);
        prop_assert_eq!(reconstruct_subgraph(&p).unwrap(), s);
    }

    #[test]
    fn normalized_rows_sum_to_one(g in graph(10)) {
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        for v in 0..g.num_nodes() {
            let row = t.normalized_row(v);
            prop_assert_eq!(row.len(), g.degree(v));
            if !row.is_empty() {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(row.iter().all(|&x| x > 0.0));
            }
        }
    }

    #[test]
    fn substructures_nest_inside_the_union((g, (v, u)) in graph_with_edge(10)) {
        let union = union_subgraph(&g, v, u).unwrap();
        let all = union.parent_edges();
        for s in [overlap_subgraph(&g, v, u).unwrap(), union_minus_subgraph(&g, v, u).unwrap()] {
            prop_assert!(s.parent_edges().is_subset(&all));
        }
        prop_assert!(max_anchor_distance(&union, v, u).unwrap() <= 1);
        let mut nodes: Vec<usize> = g.neighbors(v).iter().chain(g.neighbors(u)).copied().collect();
        nodes.sort_unstable();
        nodes.dedup();
        prop_assert_eq!(union.parent_ids(), &nodes[..]);
    }

    #[test]
    fn edge_types_partition_the_union((g, (v, u)) in graph_with_edge(10)) {
        let parts = classify_edge_types(&g, v, u).unwrap();
        let union = union_subgraph(&g, v, u).unwrap().parent_edges();
        prop_assert_eq!(parts.len(), union.len());
        let mut joined = parts.spokes.clone();
        for b in [&parts.e1, &parts.e2, &parts.e3, &parts.e4] {
            prop_assert!(b.is_disjoint(&joined));
            joined.extend(b.iter().copied());
        }
        prop_assert_eq!(joined, union);
    }

    #[test]
    fn relabeling_never_separates((g, perm) in graph_and_perm(9)) {
        let h = g.permuted(&perm).unwrap();
        prop_assert!(!wl_distinguishable(&g, &h));
        let v = distinguish_pair(&g, &h, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        prop_assert!(!v.augmented_distinguishes);
    }

    #[test]
    fn augmented_colors_refine_plain_ones(g in graph(10)) {
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        let plain = wl_refine(&g, g.num_nodes()).unwrap();
        let tagged = augmented_refine(&g, &t, g.num_nodes()).unwrap();
        prop_assert!(tagged.num_colors() >= plain.num_colors());
        // same tagged color implies same plain color
        for x in 0..g.num_nodes() {
            for y in 0..g.num_nodes() {
                if tagged.colors[x] == tagged.colors[y] {
                    prop_assert_eq!(plain.colors[x], plain.colors[y]);
                }
            }
        }
    }

    #[test]
    fn augmentation_dominates_wl(a in graph(7), b in graph(7)) {
        let v = distinguish_pair(&a, &b, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        prop_assert!(!v.wl_distinguishes || v.augmented_distinguishes);
    }

    #[test]
    fn union_layer_is_permutation_equivariant((g, perm) in graph_and_perm(8), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = 3;
        let layer = MpLayer::union(
            0.2,
            Mlp::new(&[width, 4, width], &mut rng).unwrap(),
            Trans::new(width, SoftmaxAxis::Receiver, &mut rng),
        )
        .unwrap();
        let n = g.num_nodes();
        let x = DenseTensor::glorot(n, width, &mut rng);
        let mut px = DenseTensor::zeros(n, width);
        for (v, &pv) in perm.iter().enumerate() {
            px.row_mut(pv).copy_from_slice(x.row(v));
        }
        let h = g.permuted(&perm).unwrap();
        let kind = DescriptorKind::UnionPathSvd;
        let tg = coefficient_table(&g, kind, EncodingKind::SvdSum).unwrap();
        let th = coefficient_table(&h, kind, EncodingKind::SvdSum).unwrap();
        let (a, _) = layer.forward(&GraphContext::new(&g, Some(&tg)).unwrap(), &x).unwrap();
        let (b, _) = layer.forward(&GraphContext::new(&h, Some(&th)).unwrap(), &px).unwrap();
        for (v, &pv) in perm.iter().enumerate() {
            prop_assert!(close(a.row(v), b.row(pv), 1e-9));
        }
    }

    #[test]
    fn trans_weights_sum_to_one_per_group(g in graph(9), seed in any::<u64>(), sender in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let axis = if sender { SoftmaxAxis::Sender } else { SoftmaxAxis::Receiver };
        let trans = Trans::new(5, axis, &mut rng);
        let t = coefficient_table(&g, DescriptorKind::UnionPathSvd, EncodingKind::SvdSum).unwrap();
        let ctx = GraphContext::new(&g, Some(&t)).unwrap();
        let (w, _) = trans.forward(&ctx).unwrap();
        for v in 0..g.num_nodes() {
            if g.degree(v) == 0 {
                continue;
            }
            for c in 0..5 {
                let total: f64 = ctx
                    .pairs_of(v)
                    .map(|p| match axis {
                        SoftmaxAxis::Receiver => w.get(p, c),
                        SoftmaxAxis::Sender => w.get(ctx.reverse(p), c),
                    })
                    .sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equal_coefficients_give_mean_weights(g in graph(9), seed in any::<u64>(), value in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trans = Trans::new(4, SoftmaxAxis::Receiver, &mut rng);
        let ctx = GraphContext::new(&g, None).unwrap();
        let pairs = ctx.num_pairs();
        let ctx = ctx.with_pair_values(vec![value; pairs]).unwrap();
        let (w, _) = trans.forward(&ctx).unwrap();
        for v in 0..g.num_nodes() {
            for p in ctx.pairs_of(v) {
                let expect = 1.0 / g.degree(v) as f64;
                prop_assert!(w.row(p).iter().all(|&x| (x - expect).abs() < 1e-12));
            }
        }
    }
}
