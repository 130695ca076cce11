//! Minimal a4 as an optimisation over row-sum vectors.
//!
//! A connected difference graph with the larger side on the rows has a Young
//! matrix whose first row is full, so its row sums `r_1 ≥ ... ≥ r_h ≥ 1`
//! satisfy `h + r_1 = n`, `Σ r_i = m` and `h ≥ ⌈n/2⌉`. Minimising
//! [`objective`] over those vectors gives the minimal a4 over difference
//! graphs in `(n, m)`.
//!
//! Note: the constraint is sometimes written `r_1 + h = n - 1` with
//! `h ≥ ⌊(n-1)/2⌋`; that form undercounts vertices by one, and the
//! `h + r_1 = n` form used here is checked against graph enumeration.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::difference::{parse_usize_list, row_sum_objective, YoungMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowSumVector(Vec<usize>);

impl RowSumVector {
    pub fn new(r: Vec<usize>) -> Result<Self> {
        YoungMatrix::new(r.clone())?;
        Ok(RowSumVector(r))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// `h + r_1`.
    pub fn order(&self) -> usize {
        self.0.len() + self.0[0]
    }

    pub fn young_matrix(&self) -> YoungMatrix {
        YoungMatrix::new(self.0.clone()).expect("validated on construction")
    }
}

impl fmt::Display for RowSumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for RowSumVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RowSumVector::new(parse_usize_list(s.trim())?)
    }
}

impl Serialize for RowSumVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<&YoungMatrix> for RowSumVector {
    fn from(y: &YoungMatrix) -> Self {
        RowSumVector(y.rows().to_vec())
    }
}

pub fn objective(r: &RowSumVector) -> i64 {
    row_sum_objective(&r.0)
}

/// `n - 1 ≤ m ≤ ⌊n/2⌋·⌈n/2⌉`.
pub fn is_feasible(n: usize, m: usize) -> bool {
    n >= 2 && m + 1 >= n && m <= (n / 2) * n.div_ceil(2)
}

/// Row-sum vectors with `Σ = m`, `h + r_1 = n`, `h ≥ ⌈n/2⌉`, in
/// lexicographically descending order.
pub fn enumerate_feasible(n: usize, m: usize) -> Vec<RowSumVector> {
    let mut out = Vec::new();
    if !is_feasible(n, m) {
        return out;
    }
    for first in (1..=n / 2).rev() {
        let h = n - first;
        if h < n.div_ceil(2) || m < first {
            continue;
        }
        let mut current = vec![first];
        descending_fill(h - 1, first, m - first, &mut current, &mut |r| {
            out.push(RowSumVector(r.to_vec()))
        });
    }
    out
}

/// Appends every non-increasing sequence of exactly `slots` values in
/// `1..=cap` summing to `total`, largest first.
fn descending_fill(
    slots: usize,
    cap: usize,
    total: usize,
    current: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if slots == 0 {
        if total == 0 {
            emit(current);
        }
        return;
    }
    if total < slots || total > slots * cap {
        return;
    }
    let hi = cap.min(total - (slots - 1));
    let lo = total.div_ceil(slots);
    for v in (lo..=hi).rev() {
        current.push(v);
        descending_fill(slots - 1, v, total - v, current, emit);
        current.pop();
    }
}

/// Every Young matrix with `h + r_1 ≤ n_max`, ordered by `h + r_1` and then
/// lexicographically descending.
pub fn partitions_in_box(n_max: usize) -> Vec<YoungMatrix> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for first in (1..n).rev() {
            let h = n - first;
            for total in (h - 1..=(h - 1) * first).rev() {
                let mut current = vec![first];
                descending_fill(h - 1, first, total, &mut current, &mut |r| {
                    out.push(YoungMatrix::new(r.to_vec()).expect("valid staircase"))
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSolution {
    pub n: usize,
    pub m: usize,
    /// `None` when no feasible vector exists.
    pub min: Option<i64>,
    pub argmin: Vec<RowSumVector>,
    pub candidates: usize,
}

/// Exact minimum of [`objective`] over [`enumerate_feasible`].
pub fn solve(n: usize, m: usize) -> PartitionSolution {
    let candidates = enumerate_feasible(n, m);
    let mut min = None;
    let mut argmin = Vec::new();
    for r in &candidates {
        let v = objective(r);
        match min {
            Some(best) if v > best => {}
            Some(best) if v == best => argmin.push(r.clone()),
            _ => {
                min = Some(v);
                argmin = vec![r.clone()];
            }
        }
    }
    PartitionSolution {
        n,
        m,
        min,
        argmin,
        candidates: candidates.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(s: &str) -> RowSumVector {
        s.parse().unwrap()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(objective(&rv("2,2,1,1")), 4);
        assert_eq!(objective(&rv("3,2,1")), 5);
        assert_eq!(objective(&rv("5,5,5,5")), 0);
    }

    #[test]
    fn feasible_examples() {
        assert_eq!(enumerate_feasible(6, 6), vec![rv("3,2,1"), rv("2,2,1,1")]);
        assert_eq!(enumerate_feasible(6, 9), vec![rv("3,3,3")]);
        assert_eq!(
            enumerate_feasible(7, 8),
            vec![rv("3,3,1,1"), rv("3,2,2,1"), rv("2,2,2,1,1")]
        );
        assert!(enumerate_feasible(5, 7).is_empty());
        assert!(enumerate_feasible(5, 3).is_empty());
    }

    #[test]
    fn solve_examples() {
        let s = solve(6, 6);
        assert_eq!((s.min, s.argmin.clone()), (Some(4), vec![rv("2,2,1,1")]));
        let s = solve(7, 8);
        assert_eq!((s.min, s.argmin.clone()), (Some(6), vec![rv("2,2,2,1,1")]));
        for (n, t) in [(6, 2), (7, 3), (9, 4), (8, 1)] {
            let s = solve(n, t * (n - t));
            assert_eq!(s.min, Some(0));
            let rect = RowSumVector::new(vec![t.min(n - t); t.max(n - t)]).unwrap();
            assert!(s.argmin.contains(&rect));
        }
        assert_eq!(solve(5, 7).min, None);
    }

    #[test]
    fn parse_rejects_bad_vectors() {
        assert!("1,2".parse::<RowSumVector>().is_err());
        assert!("2,,1".parse::<RowSumVector>().is_err());
        assert!("0".parse::<RowSumVector>().is_err());
    }

    #[test]
    fn box_enumeration_counts() {
        // Naive stack enumeration of sequences with a given first row.
        let fast = partitions_in_box(7).len();
        let mut brute = 0;
        for h in 1..7 {
            for w in 1..7 - h + 1 {
                // sequences with r_1 = w, length h, values in 1..=w
                let mut count = 0;
                let mut stack = vec![vec![w]];
                while let Some(s) = stack.pop() {
                    if s.len() == h {
                        count += 1;
                        continue;
                    }
                    for v in 1..=*s.last().unwrap() {
                        let mut t = s.clone();
                        t.push(v);
                        stack.push(t);
                    }
                }
                brute += count;
            }
        }
        assert_eq!(fast, brute);
    }
}
