//! Library routines checked against independent implementations that live
//! only here.

use std::collections::{BTreeMap, HashSet};

use sachs_core::compression::{
    cell_edge, corner_matching_count, corner_sets, free_matchings_through,
};
use sachs_core::graph::named::*;
use sachs_core::partition::partitions_in_box;
use sachs_core::random::{random_connected_bipartite, random_graph, rng};
use sachs_core::search::enumerate_bipartite_all;
use sachs_core::*;

/// `a_i = (-1)^i Σ_{|S| = i} det A[S]`, determinants by Bareiss elimination.
fn principal_minor_coefficients(g: &Graph) -> Vec<i128> {
    let n = g.n();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[0] = 1;
    for s in 1u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| s & (1 << v) != 0).collect();
        let k = verts.len();
        let mut a: Vec<Vec<i128>> = verts
            .iter()
            .map(|&u| verts.iter().map(|&v| g.has_edge(u, v) as i128).collect())
            .collect();
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        coeffs[k] += sign * bareiss_det(&mut a);
    }
    coeffs
}

fn bareiss_det(a: &mut [Vec<i128>]) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn matchings_by_subsets(g: &Graph, k: usize) -> u64 {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut count = 0;
    let mut chosen = Vec::new();
    fn go(
        edges: &[(usize, usize)],
        start: usize,
        k: usize,
        used: u64,
        chosen: &mut Vec<usize>,
        count: &mut u64,
    ) {
        if chosen.len() == k {
            *count += 1;
            return;
        }
        for i in start..edges.len() {
            let (u, v) = edges[i];
            let m = (1u64 << u) | (1u64 << v);
            if used & m == 0 {
                chosen.push(i);
                go(edges, i + 1, k, used | m, chosen, count);
                chosen.pop();
            }
        }
    }
    go(&edges, 0, k, 0, &mut chosen, &mut count);
    count
}

fn small_corpus() -> Vec<Graph> {
    let mut out = vec![
        path(5),
        cycle(6),
        complete(5),
        complete_bipartite(3, 4),
        star(4),
    ];
    let mut r = rng(7);
    for i in 0..60 {
        out.push(random_graph(&mut r, 3 + i % 6, 0.5));
        out.push(random_connected_bipartite(&mut r, 3 + i % 7, 0.4));
    }
    out
}

#[test]
fn charpoly_matches_principal_minors() {
    for g in small_corpus() {
        let expected = principal_minor_coefficients(&g);
        let got = charpoly_coefficients(&g);
        assert_eq!(got.len(), g.n() + 1);
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(got.get_i64(i).map(i128::from), Some(*e), "a_{i} of {g:?}");
            assert_eq!(
                sachs_coefficient(&g, i).unwrap() as i128,
                *e,
                "sachs a_{i} of {g:?}"
            );
        }
        assert_eq!(a4_fast(&g) as i128, expected.get(4).copied().unwrap_or(0));
    }
}

#[test]
fn matchings_match_subset_enumeration() {
    for g in small_corpus() {
        for k in 0..=4 {
            assert_eq!(
                count_matchings(&g, k),
                matchings_by_subsets(&g, k),
                "m_{k} of {g:?}"
            );
        }
    }
}

/// Connected bipartite graphs up to isomorphism, by edge count, computed
/// from every labelled graph and a minimum over all relabellings.
fn labelled_class_counts(n: usize) -> BTreeMap<usize, usize> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permutations(&mut p, 0, &mut perms);
    let mut seen: BTreeMap<usize, HashSet<u32>> = BTreeMap::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if !g.is_connected_bipartite() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|perm| {
                edges.iter().fold(0u32, |acc, &(u, v)| {
                    let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                    acc | 1 << pairs.iter().position(|&e| e == (a, b)).unwrap()
                })
            })
            .min()
            .unwrap();
        seen.entry(edges.len()).or_default().insert(canon);
    }
    seen.into_iter().map(|(m, s)| (m, s.len())).collect()
}

fn permutations(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == p.len() {
        out.push(p.clone());
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, out);
        p.swap(i, j);
    }
}

#[test]
fn enumeration_matches_labelled_canonicalisation() {
    for n in 2..=6 {
        let fast: BTreeMap<usize, usize> = enumerate_bipartite_all(n, 10)
            .unwrap()
            .into_iter()
            .map(|(m, v)| (m, v.len()))
            .collect();
        assert_eq!(fast, labelled_class_counts(n), "n = {n}");
    }
}

#[test]
fn enumeration_totals_match_known_sequence() {
    // Connected bipartite graphs on n unlabelled vertices.
    let known = [1, 1, 3, 5, 17, 44, 182, 730, 4032];
    for (n, &count) in (2..=10).zip(&known) {
        let total: usize = enumerate_bipartite_all(n, 10)
            .unwrap()
            .values()
            .map(Vec::len)
            .sum();
        assert_eq!(total, count, "n = {n}");
    }
}

#[test]
fn enumerated_graphs_are_pairwise_distinct_and_valid() {
    for n in 2..=8 {
        for (m, graphs) in enumerate_bipartite_all(n, 10).unwrap() {
            let mut invariants = HashSet::new();
            for g in &graphs {
                assert_eq!((g.n(), g.m()), (n, m));
                assert!(g.is_connected_bipartite());
                invariants.insert(g.to_edge_list());
            }
            assert_eq!(invariants.len(), graphs.len());
        }
    }
}

fn nested_neighbourhoods(g: &Graph) -> bool {
    let (a, _) = g.bipartition().unwrap();
    let side: Vec<usize> = (0..g.n()).filter(|&v| a & (1 << v) != 0).collect();
    side.iter().all(|&u| {
        side.iter().all(|&v| {
            let (nu, nv) = (g.neighbors(u), g.neighbors(v));
            nu & !nv == 0 || nv & !nu == 0
        })
    })
}

#[test]
fn difference_recognisers_agree() {
    for n in 2..=8 {
        for graphs in enumerate_bipartite_all(n, 10).unwrap().values() {
            for g in graphs {
                let expected = nested_neighbourhoods(g);
                assert_eq!(is_difference(g).unwrap(), expected);
                assert_eq!(is_difference_by_p5(g).unwrap(), expected);
                assert_eq!(eigenvector_of(g).is_ok(), expected);
            }
        }
    }
}

#[test]
fn difference_classes_biject_with_canonical_eigenvectors() {
    for n in 2..=9 {
        for (m, graphs) in enumerate_bipartite_all(n, 10).unwrap() {
            let from_graphs: HashSet<VertexEigenvector> = graphs
                .iter()
                .filter_map(|g| eigenvector_of(g).ok())
                .collect();
            let diff_count = graphs.iter().filter(|g| is_difference(g).unwrap()).count();
            assert_eq!(from_graphs.len(), diff_count, "({n},{m})");
            let canonical: HashSet<VertexEigenvector> = enumerate_eigenvectors(n, m)
                .iter()
                .map(VertexEigenvector::canonical)
                .collect();
            assert_eq!(from_graphs, canonical, "({n},{m})");
        }
    }
}

#[test]
fn a4_is_half_the_quadrangle_free_matchings_on_bipartite_graphs() {
    // Each quadrangle holds two 2-matchings and cancels against its own
    // weight, so only matchings outside every quadrangle survive.
    let mut r = rng(11);
    for _ in 0..200 {
        let g = random_connected_bipartite(&mut r, 8, 0.4);
        let total: u64 = g
            .edges()
            .map(|e| free_matchings_through(&g, e).unwrap())
            .sum();
        assert_eq!(total % 2, 0);
        assert_eq!(a4_fast(&g), (total / 2) as i64);
    }
    assert_eq!(a4_fast(&cycle(4)), 0);
}

#[test]
fn corner_counts_match_direct_enumeration() {
    for y in partitions_in_box(9) {
        let g = y.realize().unwrap();
        for &c in &corner_sets(&y).out_corners {
            let direct = free_matchings_through(&g, cell_edge(&y, c)).unwrap();
            assert_eq!(
                corner_matching_count(&y, c).unwrap(),
                direct as i64,
                "{y} at {c:?}"
            );
        }
    }
}

#[test]
fn partition_and_difference_minima_agree_with_bruteforce() {
    for n in 2..=9 {
        for (m, graphs) in enumerate_bipartite_all(n, 10).unwrap() {
            let brute = graphs.iter().map(a4_fast).min();
            assert_eq!(min_a4_difference(n, m).min, brute, "({n},{m})");
            assert_eq!(solve(n, m).min, brute, "({n},{m})");
        }
    }
}
