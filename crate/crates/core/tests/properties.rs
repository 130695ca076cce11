use proptest::prelude::*;

use sachs_core::compression::{audit_vertex_compression, compress, legal_moves, young_compress};
use sachs_core::difference::realize_blocks;
use sachs_core::random::{random_connected_bipartite, rng};
use sachs_core::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n).unwrap();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn arb_bipartite(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>(), 0.1f64..0.9)
        .prop_map(|(n, seed, p)| random_connected_bipartite(&mut rng(seed), n, p))
}

fn arb_eigenvector(max_k: usize, max_block: usize) -> impl Strategy<Value = VertexEigenvector> {
    (1..=max_k).prop_flat_map(move |k| {
        (
            proptest::collection::vec(1..=max_block, k),
            proptest::collection::vec(1..=max_block, k),
        )
            .prop_map(|(x, y)| VertexEigenvector::new(x, y).unwrap())
    })
}

fn arb_permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng(seed));
    p
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in arb_graph(12)) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn graph6_round_trip(g in arb_graph(20)) {
        prop_assert_eq!(Graph::parse_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn coefficients_are_relabelling_invariant(g in arb_graph(9), seed in any::<u64>()) {
        let h = g.permuted(&arb_permutation(g.n(), seed)).unwrap();
        prop_assert_eq!(charpoly_coefficients(&g), charpoly_coefficients(&h));
        prop_assert_eq!(a4_fast(&g), a4_fast(&h));
    }

    #[test]
    fn charpoly_low_order_terms(g in arb_graph(10)) {
        let c = charpoly_coefficients(&g);
        prop_assert_eq!(c.get_i64(0), Some(1));
        prop_assert_eq!(c.get_i64(1), Some(0));
        prop_assert_eq!(c.get_i64(2), Some(-(g.m() as i64)));
        if g.n() >= 3 {
            prop_assert_eq!(c.get_i64(3), Some(-2 * count_short_cycles(&g).c3 as i64));
        }
    }

    #[test]
    fn eigenvector_round_trips(ev in arb_eigenvector(4, 4)) {
        let text = ev.to_string();
        prop_assert_eq!(text.parse::<VertexEigenvector>().unwrap(), ev.clone());
        let g = realize(&ev).unwrap();
        prop_assert_eq!((g.n(), g.m()), (ev.order(), ev.size()));
        prop_assert_eq!(eigenvector_of(&g).unwrap(), ev.canonical());
        prop_assert_eq!(young_matrix(&ev).eigenvector(), ev.clone());
    }

    #[test]
    fn a4_formulas_agree_and_ignore_orientation(ev in arb_eigenvector(5, 3)) {
        let g = realize(&ev).unwrap();
        let expected = a4_fast(&g);
        for e in [ev.clone(), ev.swapped()] {
            prop_assert_eq!(a4_by_blocks(&e), expected);
            prop_assert_eq!(a4_by_char_matrix(&e), expected);
            prop_assert_eq!(a4_by_row_sums(&young_matrix(&e)), expected);
        }
    }

    #[test]
    fn difference_complement_is_induced(ev in arb_eigenvector(5, 3), i in 1usize..5) {
        let k = ev.character();
        prop_assume!(i < k);
        let sub = difference_complement(&ev, i).unwrap();
        // Zero out the removed blocks and compare realisations.
        let mut x = ev.x().to_vec();
        let mut y = ev.y().to_vec();
        x[..i].iter_mut().for_each(|v| *v = 0);
        y[k - i..].iter_mut().for_each(|v| *v = 0);
        let g = realize_blocks(&x, &y[..]);
        prop_assert!(g.is_ok());
        prop_assert_eq!(eigenvector_of(&g.unwrap()).unwrap(), sub.canonical());
    }

    #[test]
    fn compression_preserves_size_and_never_adds_matchings(g in arb_bipartite(10), a in 0usize..10, b in 0usize..10) {
        let (u, v) = (a % g.n(), b % g.n());
        prop_assume!(u != v);
        let h = compress(&g, u, v).unwrap();
        prop_assert_eq!(h.m(), g.m());
        let audit = audit_vertex_compression(&g, u, v, 4).unwrap();
        prop_assert!(!audit.violations.any(), "{:?}", audit);
    }

    #[test]
    fn corner_moves_preserve_edge_count(ev in arb_eigenvector(4, 3)) {
        let y = young_matrix(&ev);
        for (o, i) in legal_moves(&y) {
            let z = young_compress(&y, o, i).unwrap();
            prop_assert_eq!(z.sum(), y.sum());
        }
    }

    #[test]
    fn partition_objective_matches_graph(ev in arb_eigenvector(4, 3)) {
        let oriented = ev.canonical();
        let r = RowSumVector::from(&young_matrix(&oriented));
        prop_assert_eq!(objective(&r), a4_fast(&realize(&oriented).unwrap()));
    }
}
