//! Difference (chain) graphs and their three interchangeable descriptions:
//! the block-size vector, the Young matrix of row sums, and the k×k
//! characteristic matrix. Each description carries its own a4 formula.
//!
//! Block convention: X-block `i` (1-based) is completely joined to Y-blocks
//! `1..=k-i+1` and to nothing else, so `X_1` and `Y_1` are the blocks with
//! the largest neighbourhoods.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexEigenvector {
    x: Vec<usize>,
    y: Vec<usize>,
}

impl VertexEigenvector {
    pub fn new(x: Vec<usize>, y: Vec<usize>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Domain(format!(
                "eigenvector needs two non-empty sequences of equal length, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|&v| v == 0) {
            return Err(Error::Domain("eigenvector entries must be positive".into()));
        }
        Ok(VertexEigenvector { x, y })
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    /// The character `k`.
    pub fn character(&self) -> usize {
        self.x.len()
    }

    pub fn x_total(&self) -> usize {
        self.x.iter().sum()
    }

    pub fn y_total(&self) -> usize {
        self.y.iter().sum()
    }

    pub fn order(&self) -> usize {
        self.x_total() + self.y_total()
    }

    pub fn size(&self) -> usize {
        let k = self.character();
        let mut prefix = 0;
        let mut m = 0;
        // X-block i sees y_1 + ... + y_{k-i+1}; walk i from k down to 1.
        for i in (0..k).rev() {
            prefix += self.y[k - 1 - i];
            m += self.x[i] * prefix;
        }
        m
    }

    /// Exchanges the roles of the two sides; describes the same graph.
    pub fn swapped(&self) -> Self {
        VertexEigenvector {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// `Σx ≥ Σy`.
    pub fn is_oriented(&self) -> bool {
        self.x_total() >= self.y_total()
    }

    /// Canonical orientation: larger side first, ties broken towards the
    /// lexicographically larger x-sequence.
    pub fn canonical(&self) -> Self {
        let (sx, sy) = (self.x_total(), self.y_total());
        if sx > sy || (sx == sy && self.x >= self.y) {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Edge count of `G[X_i ; Y_1 ∪ ... ∪ Y_j]` style sub-blocks: the sum of
    /// `x_a y_b` over the given 1-based ranges, restricted to `a + b ≤ k+1`.
    fn edges_between(
        &self,
        xs: std::ops::RangeInclusive<usize>,
        ys: std::ops::RangeInclusive<usize>,
    ) -> u64 {
        let k = self.character();
        let mut total = 0u64;
        for a in xs {
            for b in ys.clone() {
                if a + b <= k + 1 {
                    total += (self.x[a - 1] * self.y[b - 1]) as u64;
                }
            }
        }
        total
    }
}

impl fmt::Display for VertexEigenvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", join(&self.x), join(&self.y))
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("malformed integer {tok:?} in {s:?}"),
                });
            }
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("integer out of range {tok:?}"),
            })
        })
        .collect()
}

impl FromStr for VertexEigenvector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (xs, ys) = s.trim().split_once(';').ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("eigenvector {s:?} needs exactly one ';'"),
        })?;
        if ys.contains(';') {
            return Err(Error::Parse {
                line: 1,
                msg: format!("eigenvector {s:?} needs exactly one ';'"),
            });
        }
        VertexEigenvector::new(parse_usize_list(xs)?, parse_usize_list(ys)?)
    }
}

impl Serialize for VertexEigenvector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexEigenvector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Left-justified 0/1 staircase, stored by its row sums.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungMatrix {
    rows: Vec<usize>,
}

impl YoungMatrix {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Domain("Young matrix needs at least one row".into()));
        }
        if rows.contains(&0) {
            return Err(Error::Domain("Young matrix rows must be positive".into()));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "Young matrix rows must be non-increasing, got {rows:?}"
            )));
        }
        Ok(YoungMatrix { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows[0]
    }

    /// `s(Y)`, the number of ones (edges).
    pub fn sum(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Entry `y_{ij}` with 1-based indices; out-of-range reads as 0.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.rows.len() && j <= self.rows[i - 1]
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (1..=self.width())
            .map(|j| self.rows.iter().take_while(|&&r| r >= j).count())
            .collect()
    }

    /// The eigenvector whose Young matrix this is: rows are the X side.
    pub fn eigenvector(&self) -> VertexEigenvector {
        let mut values: Vec<usize> = Vec::new();
        let mut x = Vec::new();
        for &r in &self.rows {
            if values.last() == Some(&r) {
                *x.last_mut().unwrap() += 1;
            } else {
                values.push(r);
                x.push(1);
            }
        }
        let k = values.len();
        // Row value of X-block i is y_1 + ... + y_{k-i+1}.
        let y = (1..=k)
            .map(|j| values[k - j] - if j == 1 { 0 } else { values[k - j + 1] })
            .collect();
        VertexEigenvector::new(x, y).expect("row sums give a valid eigenvector")
    }

    /// Graph with rows `0..h` and columns `h..h+r_1`.
    pub fn realize(&self) -> Result<Graph> {
        let h = self.height();
        let mut g = Graph::empty(h + self.width())?;
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..r {
                g.add_edge(i, h + j)?;
            }
        }
        Ok(g)
    }
}

impl fmt::Display for YoungMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.rows))
    }
}

impl FromStr for YoungMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        YoungMatrix::new(parse_usize_list(s.trim())?)
    }
}

impl Serialize for YoungMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

/// `t_ij = x_i y_j` on and above the anti-diagonal, zero below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicMatrix {
    entries: Vec<Vec<u64>>,
}

impl CharacteristicMatrix {
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    /// Entry with 1-based indices, matching the usual matrix notation.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// `s(T(rows; cols))` over 1-based inclusive ranges.
    pub fn block_sum(
        &self,
        rows: std::ops::RangeInclusive<usize>,
        cols: std::ops::RangeInclusive<usize>,
    ) -> u64 {
        rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .sum()
    }
}

pub fn characteristic_matrix(ev: &VertexEigenvector) -> CharacteristicMatrix {
    let k = ev.character();
    let entries = (1..=k)
        .map(|i| {
            (1..=k)
                .map(|j| {
                    if i + j <= k + 1 {
                        (ev.x[i - 1] * ev.y[j - 1]) as u64
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    CharacteristicMatrix { entries }
}

/// Vertex numbering: X-blocks in order, then Y-blocks in order.
pub fn realize(ev: &VertexEigenvector) -> Result<Graph> {
    realize_blocks(&ev.x, &ev.y)
}

/// Like [`realize`] but tolerates empty blocks, which some printed
/// closed-form eigenvectors produce at the edge of their ranges.
pub fn realize_blocks(x: &[usize], y: &[usize]) -> Result<Graph> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Domain(
            "block sequences must have equal positive length".into(),
        ));
    }
    let k = x.len();
    let nx: usize = x.iter().sum();
    let n = nx + y.iter().sum::<usize>();
    let mut g = Graph::empty(n)?;
    let mut y_start = vec![nx; k + 1];
    for j in 0..k {
        y_start[j + 1] = y_start[j] + y[j];
    }
    let mut u = 0;
    for (i, &size) in x.iter().enumerate() {
        for _ in 0..size {
            for v in y_start[0]..y_start[k - i] {
                g.add_edge(u, v)?;
            }
            u += 1;
        }
    }
    Ok(g)
}

pub fn young_matrix(ev: &VertexEigenvector) -> YoungMatrix {
    let k = ev.character();
    let mut rows = Vec::with_capacity(ev.x_total());
    for i in 0..k {
        let r: usize = ev.y[..k - i].iter().sum();
        rows.extend(std::iter::repeat_n(r, ev.x[i]));
    }
    YoungMatrix { rows }
}

fn require_connected_bipartite(g: &Graph) -> Result<(u64, u64)> {
    if !g.is_connected() {
        return Err(Error::Domain("graph is not connected".into()));
    }
    g.bipartition()
        .ok_or_else(|| Error::Domain("graph is not bipartite".into()))
}

/// Neighbourhoods on one side form a chain under inclusion.
pub fn is_difference(g: &Graph) -> Result<bool> {
    let (a, _) = require_connected_bipartite(g)?;
    let mut nbhds: Vec<u64> = bits(a).map(|u| g.neighbors(u)).collect();
    nbhds.sort_by_key(|m| m.count_ones());
    Ok(nbhds.windows(2).all(|w| w[0] & !w[1] == 0))
}

/// Connected bipartite graph without an induced `P_5`.
pub fn is_difference_by_p5(g: &Graph) -> Result<bool> {
    require_connected_bipartite(g)?;
    Ok(find_induced_p5(g).is_none())
}

/// Some induced path on five vertices, listed in path order.
pub fn find_induced_p5(g: &Graph) -> Option<[usize; 5]> {
    fn extend(g: &Graph, path: &mut Vec<usize>) -> bool {
        if path.len() == 5 {
            return true;
        }
        let last = *path.last().unwrap();
        let mut earlier = 0u64;
        for &p in &path[..path.len() - 1] {
            earlier |= bit(p);
        }
        let on_path = earlier | bit(last);
        for w in bits(g.neighbors(last) & !on_path) {
            // Induced: w may only touch the current end of the path.
            if g.neighbors(w) & earlier != 0 {
                continue;
            }
            path.push(w);
            if extend(g, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    for start in 0..g.n() {
        let mut path = vec![start];
        if extend(g, &mut path) {
            return Some(path.try_into().unwrap());
        }
    }
    None
}

/// Recovers the canonical eigenvector of a difference graph.
pub fn eigenvector_of(g: &Graph) -> Result<VertexEigenvector> {
    if !is_difference(g)? {
        return Err(Error::Domain("graph is not a difference graph".into()));
    }
    let (a, b) = g.bipartition().expect("checked bipartite");
    let group = |side: u64| -> Vec<(u64, usize)> {
        // (neighbourhood, multiplicity), largest neighbourhood first.
        let mut blocks: Vec<(u64, usize)> = Vec::new();
        for u in bits(side) {
            let nb = g.neighbors(u);
            match blocks.iter_mut().find(|(m, _)| *m == nb) {
                Some(entry) => entry.1 += 1,
                None => blocks.push((nb, 1)),
            }
        }
        blocks.sort_by_key(|&(m, _)| std::cmp::Reverse(m.count_ones()));
        blocks
    };
    let xs = group(a);
    let ys = group(b);
    if xs.len() != ys.len() {
        return Err(Error::Internal(format!(
            "duplicate classes differ in number: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let k = xs.len();
    let block_mask = |blocks: &[(u64, usize)], side: u64, upto: usize| -> u64 {
        // Union of the vertices of blocks 1..=upto on `side`.
        bits(side)
            .filter(|&u| blocks[..upto].iter().any(|&(nb, _)| g.neighbors(u) == nb))
            .fold(0, |m, u| m | bit(u))
    };
    for (i, &(nb, _)) in xs.iter().enumerate() {
        if nb != block_mask(&ys, b, k - i) {
            return Err(Error::Internal(format!(
                "X-block {} is not joined to exactly Y-blocks 1..{}",
                i + 1,
                k - i
            )));
        }
    }
    let ev = VertexEigenvector::new(
        xs.iter().map(|&(_, c)| c).collect(),
        ys.iter().map(|&(_, c)| c).collect(),
    )?;
    Ok(ev.canonical())
}

/// `(x_{i+1}, ..., x_k ; y_1, ..., y_{k-i})`: the difference graph left after
/// removing `X_1 ∪ ... ∪ X_i` and `Y_{k-i+1}`.
pub fn difference_complement(ev: &VertexEigenvector, i: usize) -> Result<VertexEigenvector> {
    let k = ev.character();
    if i == 0 || i >= k {
        return Err(Error::Domain(format!(
            "difference complement index {i} outside 1..={}",
            k.saturating_sub(1)
        )));
    }
    VertexEigenvector::new(ev.x[i..].to_vec(), ev.y[..k - i].to_vec())
}

/// a4 as a sum over X-blocks: every edge at `X_i` (i ≥ 2) times every edge
/// of the difference graph on `X_1..X_{i-1}` and `Y_{k-i+2}..Y_k`. These
/// are exactly the 2-matchings that lie in no quadrangle.
pub fn a4_by_blocks(ev: &VertexEigenvector) -> i64 {
    let k = ev.character();
    (2..=k)
        .map(|i| {
            let block = ev.edges_between(i..=i, 1..=k - i + 1);
            let rest = ev.edges_between(1..=i - 1, k - i + 2..=k);
            block * rest
        })
        .sum::<u64>() as i64
}

/// `Σ_{i<k} s(T(·; k-i+1)) · s(T(i+1..k; 1..k-i))`.
pub fn a4_by_char_matrix(ev: &VertexEigenvector) -> i64 {
    let t = characteristic_matrix(ev);
    let k = t.order();
    (1..k)
        .map(|i| t.block_sum(1..=k, k - i + 1..=k - i + 1) * t.block_sum(i + 1..=k, 1..=k - i))
        .sum::<u64>() as i64
}

/// `Σ_{i<h} Σ_{j>i} (r_i - r_{i+1}) · i · r_j`.
pub fn a4_by_row_sums(y: &YoungMatrix) -> i64 {
    row_sum_objective(y.rows())
}

pub(crate) fn row_sum_objective(r: &[usize]) -> i64 {
    let h = r.len();
    let mut total = 0u64;
    for i in 1..h {
        let drop = (r[i - 1] - r[i]) as u64;
        if drop == 0 {
            continue;
        }
        let tail: u64 = r[i..].iter().map(|&v| v as u64).sum();
        total += drop * i as u64 * tail;
    }
    total as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{a4_fast, count_short_cycles};
    use crate::graph::named::*;

    fn ev(s: &str) -> VertexEigenvector {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(ev("2,2;1,1").to_string(), "2,2;1,1");
        assert!("2,2;1".parse::<VertexEigenvector>().is_err());
        assert!("2,0;1,1".parse::<VertexEigenvector>().is_err());
        assert!("2,2".parse::<VertexEigenvector>().is_err());
        assert!("1;1;1".parse::<VertexEigenvector>().is_err());
        assert!("a;1".parse::<VertexEigenvector>().is_err());
    }

    #[test]
    fn recognition_examples() {
        for (a, b) in [(1, 1), (2, 3), (4, 4), (1, 5)] {
            let g = complete_bipartite(a, b);
            assert!(is_difference(&g).unwrap());
            assert!(is_difference_by_p5(&g).unwrap());
        }
        assert!(!is_difference(&path(5)).unwrap());
        assert!(!is_difference_by_p5(&path(5)).unwrap());
        assert!(!is_difference(&cycle(6)).unwrap());
        assert!(find_induced_p5(&cycle(6)).is_some());
        assert!(is_difference(&path(4)).unwrap());
        assert!(matches!(is_difference(&cycle(3)), Err(Error::Domain(_))));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(is_difference(&two), Err(Error::Domain(_))));
    }

    #[test]
    fn eigenvector_examples() {
        assert_eq!(
            eigenvector_of(&complete_bipartite(2, 3)).unwrap(),
            ev("3;2")
        );
        assert_eq!(eigenvector_of(&path(4)).unwrap(), ev("1,1;1,1"));
        assert_eq!(eigenvector_of(&star(5)).unwrap(), ev("5;1"));
        assert!(eigenvector_of(&path(5)).is_err());
    }

    #[test]
    fn realize_examples() {
        assert_eq!(realize(&ev("1;1")).unwrap(), complete(2));
        let g = realize(&ev("2,2;1,1")).unwrap();
        assert_eq!((g.n(), g.m()), (6, 6));
        assert_eq!(count_short_cycles(&g).c4, 1);
        assert_eq!(realize(&ev("3;4")).unwrap(), complete_bipartite(3, 4));
    }

    #[test]
    fn young_examples() {
        assert_eq!(young_matrix(&ev("2,2;1,1")).rows(), &[2, 2, 1, 1]);
        assert_eq!(young_matrix(&ev("1,2;1,2")).rows(), &[3, 1, 1]);
        assert_eq!(young_matrix(&ev("4;3")).rows(), &[3, 3, 3, 3]);
        let y = young_matrix(&ev("1,2;1,2"));
        assert_eq!(y.column_sums(), vec![3, 1, 1]);
        assert_eq!(y.sum(), ev("1,2;1,2").size());
        assert_eq!(y.eigenvector(), ev("1,2;1,2"));
    }

    #[test]
    fn characteristic_examples() {
        let t = characteristic_matrix(&ev("3,5;7,11"));
        assert_eq!(t.entries(), &[vec![21, 33], vec![35, 0]]);
        let t = characteristic_matrix(&ev("2,2;1,1"));
        assert_eq!(t.entries(), &[vec![2, 2], vec![2, 0]]);
        let t = characteristic_matrix(&ev("3;4"));
        assert_eq!(t.entries(), &[vec![12]]);
    }

    #[test]
    fn a4_formula_examples() {
        for (s, expected) in [
            ("3;2", 0),
            ("2,2;1,1", 4),
            ("1,1;1,1", 1),
            ("1,1,1;1,1,1", 5),
        ] {
            let e = ev(s);
            assert_eq!(a4_by_blocks(&e), expected, "blocks {s}");
            assert_eq!(a4_by_char_matrix(&e), expected, "char matrix {s}");
            assert_eq!(
                a4_by_row_sums(&young_matrix(&e.canonical())),
                expected,
                "rows {s}"
            );
            assert_eq!(a4_fast(&realize(&e).unwrap()), expected, "graph {s}");
        }
        let rows = |v: &[usize]| a4_by_row_sums(&YoungMatrix::new(v.to_vec()).unwrap());
        assert_eq!(rows(&[2, 2, 1, 1]), 4);
        assert_eq!(rows(&[3, 2, 1]), 5);
        assert_eq!(rows(&[4, 4, 4]), 0);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(difference_complement(&ev("2,2;1,1"), 1).unwrap(), ev("2;1"));
        assert_eq!(
            difference_complement(&ev("1,1,1;1,1,1"), 1).unwrap(),
            ev("1,1;1,1")
        );
        assert_eq!(
            difference_complement(&ev("1,1,1;1,1,1"), 2).unwrap(),
            ev("1;1")
        );
        assert!(difference_complement(&ev("1,1,1;1,1,1"), 3).is_err());
        assert!(difference_complement(&ev("1,1,1;1,1,1"), 0).is_err());
    }

    #[test]
    fn young_matrix_validation() {
        assert!(YoungMatrix::new(vec![1, 2]).is_err());
        assert!(YoungMatrix::new(vec![2, 0]).is_err());
        assert!(YoungMatrix::new(vec![]).is_err());
        let y: YoungMatrix = "3,1,1".parse().unwrap();
        assert!(y.entry(1, 3) && !y.entry(2, 2) && !y.entry(4, 1) && !y.entry(0, 1));
    }

    #[test]
    fn realize_blocks_with_empty_block() {
        // Empty X_3 merges Y_1 and Y_2 into one duplicate class.
        let g = realize_blocks(&[3, 1, 0], &[1, 1, 1]).unwrap();
        assert_eq!(eigenvector_of(&g).unwrap(), ev("3,1;2,1"));
    }
}
