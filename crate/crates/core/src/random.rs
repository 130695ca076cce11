//! Seeded random graphs for fuzzing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub type FuzzRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FuzzRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).expect("n within bounds");
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    g
}

/// Connected bipartite graph on `n ≥ 2` vertices: a random spanning tree of
/// `K_{a,n-a}` for a random split, plus each remaining cross pair with
/// probability `p`. Vertex labels are shuffled.
pub fn random_connected_bipartite(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    assert!(n >= 2, "need at least two vertices");
    let a = rng.gen_range(1..n);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let side_a: Vec<usize> = labels[..a].to_vec();
    let side_b: Vec<usize> = labels[a..].to_vec();

    let mut g = Graph::empty(n).expect("n within bounds");
    let mut in_a = vec![side_a[0]];
    let mut in_b = vec![side_b[0]];
    g.add_edge(side_a[0], side_b[0]).unwrap();
    let mut rest: Vec<(usize, bool)> = side_a[1..]
        .iter()
        .map(|&v| (v, true))
        .chain(side_b[1..].iter().map(|&v| (v, false)))
        .collect();
    rest.shuffle(rng);
    for (v, on_a) in rest {
        let other = if on_a { &in_b } else { &in_a };
        let w = other[rng.gen_range(0..other.len())];
        g.add_edge(v, w).unwrap();
        if on_a {
            in_a.push(v);
        } else {
            in_b.push(v);
        }
    }
    for &u in &side_a {
        for &v in &side_b {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}
