//! Adjacency coefficients and the counts they are built from.
//!
//! `a_i` is the coefficient of `λ^{n-i}` in `det(λI - A)`. Two independent
//! routes are provided: [`sachs_coefficient`] enumerates Sachs subgraphs
//! explicitly, [`charpoly_coefficients`] runs an exact Faddeev-LeVerrier
//! recurrence over big integers. [`a4_fast`] is the closed form
//! `m_2 - 2 c_4` used on hot paths.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph};

/// Largest order accepted by the exponential Sachs enumeration.
pub const SACHS_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    coeffs: Vec<BigInt>,
}

impl CoefficientVector {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    /// Coefficient `a_i` when it fits in an `i64`.
    pub fn get_i64(&self, i: usize) -> Option<i64> {
        self.coeffs.get(i).and_then(ToPrimitive::to_i64)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.coeffs
    }
}

impl std::ops::Index<usize> for CoefficientVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortCycles {
    pub c3: u64,
    pub c4: u64,
}

/// Number of `r`-edge matchings, by branching over edges in order.
pub fn count_matchings(g: &Graph, r: usize) -> u64 {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    fn go(edges: &[(usize, usize)], used: u64, r: usize) -> u64 {
        if r == 0 {
            return 1;
        }
        let mut total = 0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if edges.len() - i < r {
                break;
            }
            if used & (bit(u) | bit(v)) == 0 {
                total += go(&edges[i + 1..], used | bit(u) | bit(v), r - 1);
            }
        }
        total
    }
    go(&edges, 0, r)
}

/// Number of 2-matchings: all edge pairs minus pairs sharing a vertex.
pub fn count_2_matchings(g: &Graph) -> u64 {
    let m = g.m() as u64;
    let adjacent_pairs: u64 = (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    m * m.saturating_sub(1) / 2 - adjacent_pairs
}

pub fn count_short_cycles(g: &Graph) -> ShortCycles {
    let n = g.n();
    let mut c3 = 0u64;
    let mut pair_sum = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            let common = (g.neighbors(u) & g.neighbors(v)).count_ones() as u64;
            // Each 4-cycle has two diagonals, hence is seen twice.
            pair_sum += common * common.saturating_sub(1) / 2;
            if g.has_edge(u, v) {
                let above = g.neighbors(u) & g.neighbors(v) & !crate::graph::full_mask(v + 1);
                c3 += above.count_ones() as u64;
            }
        }
    }
    ShortCycles {
        c3,
        c4: pair_sum / 2,
    }
}

/// `a_4 = m_2 - 2 c_4`.
pub fn a4_fast(g: &Graph) -> i64 {
    count_2_matchings(g) as i64 - 2 * count_short_cycles(g).c4 as i64
}

/// One component of a Sachs subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SachsComponent {
    Edge(usize, usize),
    /// Vertices in cyclic order, starting at the smallest.
    Cycle(Vec<usize>),
}

impl SachsComponent {
    pub fn vertex_mask(&self) -> u64 {
        match self {
            SachsComponent::Edge(u, v) => bit(*u) | bit(*v),
            SachsComponent::Cycle(vs) => vs.iter().fold(0, |m, &v| m | bit(v)),
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            SachsComponent::Edge(u, v) => vec![(*u.min(v), *u.max(v))],
            SachsComponent::Cycle(vs) => (0..vs.len())
                .map(|i| {
                    let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
                    (a.min(b), a.max(b))
                })
                .collect(),
        }
    }
}

/// A Sachs subgraph as an ordered list of components (ordered by their
/// smallest vertex).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SachsSubgraph {
    pub components: Vec<SachsComponent>,
}

impl SachsSubgraph {
    pub fn cycles(&self) -> usize {
        self.components
            .iter()
            .filter(|c| matches!(c, SachsComponent::Cycle(_)))
            .count()
    }

    /// `(-1)^{components} 2^{cycles}`.
    pub fn weight(&self) -> i64 {
        let sign = if self.components.len().is_multiple_of(2) {
            1
        } else {
            -1
        };
        sign * (1i64 << self.cycles())
    }

    pub fn vertex_mask(&self) -> u64 {
        self.components.iter().fold(0, |m, c| m | c.vertex_mask())
    }
}

/// Calls `visit` once for every Sachs subgraph of `g` on exactly `order`
/// vertices.
pub fn for_each_sachs_subgraph(
    g: &Graph,
    order: usize,
    mut visit: impl FnMut(&SachsSubgraph),
) -> Result<()> {
    if g.n() > SACHS_MAX_N {
        return Err(Error::Scale {
            what: "Sachs enumeration order",
            got: g.n(),
            limit: SACHS_MAX_N,
        });
    }
    if order > g.n() {
        return Err(Error::Domain(format!(
            "Sachs order {order} exceeds vertex count {}",
            g.n()
        )));
    }
    let mut current = SachsSubgraph::default();
    sachs_rec(g, g.vertex_mask(), 0, order, &mut current, &mut visit);
    Ok(())
}

fn sachs_rec(
    g: &Graph,
    avail: u64,
    start: usize,
    remaining: usize,
    current: &mut SachsSubgraph,
    visit: &mut impl FnMut(&SachsSubgraph),
) {
    if remaining == 0 {
        visit(current);
        return;
    }
    if remaining == 1 {
        return;
    }
    for v in start..g.n() {
        if avail & bit(v) == 0 {
            continue;
        }
        // Components are keyed by their minimum vertex, so every other
        // vertex of v's component is larger than v.
        let above = avail & !crate::graph::full_mask(v + 1);
        if (above.count_ones() as usize) + 1 < remaining {
            break;
        }
        for w in bits(g.neighbors(v) & above) {
            current.components.push(SachsComponent::Edge(v, w));
            sachs_rec(
                g,
                avail & !bit(v) & !bit(w),
                v + 1,
                remaining - 2,
                current,
                visit,
            );
            current.components.pop();
        }
        if remaining >= 3 {
            let mut path = vec![v];
            cycles_from(g, v, above, remaining, &mut path, &mut |cycle| {
                let used = cycle.iter().fold(0u64, |m, &x| m | bit(x));
                current
                    .components
                    .push(SachsComponent::Cycle(cycle.to_vec()));
                sachs_rec(
                    g,
                    avail & !used,
                    v + 1,
                    remaining - cycle.len(),
                    current,
                    visit,
                );
                current.components.pop();
            });
        }
    }
}

/// Enumerates each cycle through `root` (its minimum vertex) of length at
/// most `max_len`, once per undirected cycle.
fn cycles_from(
    g: &Graph,
    root: usize,
    allowed: u64,
    max_len: usize,
    path: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    let last = *path.last().expect("non-empty path");
    let on_path = path.iter().fold(0u64, |m, &x| m | bit(x));
    if path.len() >= 3 && g.has_edge(last, root) && path[1] < last {
        emit(path);
    }
    if path.len() == max_len {
        return;
    }
    for w in bits(g.neighbors(last) & allowed & !on_path) {
        path.push(w);
        cycles_from(g, root, allowed, max_len, path, emit);
        path.pop();
    }
}

/// `a_i` as the signed sum over all `i`-vertex Sachs subgraphs.
pub fn sachs_coefficient(g: &Graph, i: usize) -> Result<i64> {
    let mut total = 0i64;
    for_each_sachs_subgraph(g, i, |h| total += h.weight())?;
    Ok(total)
}

/// Exact coefficients of `det(λI - A)` via Faddeev-LeVerrier:
/// `M_1 = I`, `c_k = -tr(A M_k) / k`, `M_{k+1} = A M_k + c_k I`.
/// Every division is exact over the integers.
pub fn charpoly_coefficients(g: &Graph) -> CoefficientVector {
    let n = g.n();
    let mut coeffs = vec![BigInt::from(1)];
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    for k in 1..=n {
        // A·M, using the 0/1 adjacency rows directly.
        let am: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| bits(g.neighbors(i)).fold(BigInt::zero(), |acc, l| acc + &m[l][j]))
                    .collect()
            })
            .collect();
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let c = -trace / BigInt::from(k);
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
        coeffs.push(c);
    }
    CoefficientVector { coeffs }
}
