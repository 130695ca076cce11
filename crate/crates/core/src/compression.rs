//! Vertex compression `G_{u→v}` and corner compression of Young matrices,
//! with audits that record (rather than assume) the monotonicity claims made
//! about them.

use serde::Serialize;

use crate::coefficients::{a4_fast, count_matchings};
use crate::difference::{a4_by_row_sums, YoungMatrix};
use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph};
use crate::partition::partitions_in_box;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborSplit {
    /// `N(u) ∩ N(v)`.
    pub common: Vec<usize>,
    /// Neighbours of `u` only, excluding `v`.
    pub u_only: Vec<usize>,
    /// Neighbours of `v` only, excluding `u`.
    pub v_only: Vec<usize>,
}

fn split_masks(g: &Graph, u: usize, v: usize) -> Result<(u64, u64, u64)> {
    for w in [u, v] {
        if w >= g.n() {
            return Err(Error::Range {
                vertex: w,
                n: g.n(),
            });
        }
    }
    if u == v {
        return Err(Error::Precondition(format!(
            "compression needs two distinct vertices, got {u} twice"
        )));
    }
    let (nu, nv) = (g.neighbors(u), g.neighbors(v));
    let outside = !(bit(u) | bit(v));
    Ok((nu & nv & outside, nu & !nv & outside, nv & !nu & outside))
}

pub fn neighbor_split(g: &Graph, u: usize, v: usize) -> Result<NeighborSplit> {
    let (common, u_only, v_only) = split_masks(g, u, v)?;
    Ok(NeighborSplit {
        common: bits(common).collect(),
        u_only: bits(u_only).collect(),
        v_only: bits(v_only).collect(),
    })
}

/// Moves every edge from `u` to a private neighbour of `u` over to `v`.
pub fn compress(g: &Graph, u: usize, v: usize) -> Result<Graph> {
    let (_, u_only, _) = split_masks(g, u, v)?;
    let mut rows = g.rows().to_vec();
    rows[u] &= !u_only;
    rows[v] |= u_only;
    for w in bits(u_only) {
        rows[w] = (rows[w] & !bit(u)) | bit(v);
    }
    Graph::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingComparison {
    pub k: usize,
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CompressionViolations {
    /// Some `m_k` increased.
    pub matchings_increased: bool,
    /// One side of the split was empty yet some `m_k` changed.
    pub strictness: bool,
    /// `dis(u,v) ≥ 2` yet a4 increased.
    pub a4_increased: bool,
}

impl CompressionViolations {
    pub fn any(&self) -> bool {
        self.matchings_increased || self.strictness || self.a4_increased
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCompressionAudit {
    pub from: usize,
    pub to: usize,
    pub distance: Option<usize>,
    pub split: NeighborSplit,
    pub matchings: Vec<MatchingComparison>,
    pub a4_before: i64,
    pub a4_after: i64,
    pub compressed_connected: bool,
    /// Some `m_k` (k ≤ k_max) strictly decreased.
    pub strict_decrease: bool,
    pub violations: CompressionViolations,
}

pub fn audit_vertex_compression(
    g: &Graph,
    u: usize,
    v: usize,
    k_max: usize,
) -> Result<VertexCompressionAudit> {
    let split = neighbor_split(g, u, v)?;
    let h = compress(g, u, v)?;
    let matchings: Vec<_> = (1..=k_max)
        .map(|k| MatchingComparison {
            k,
            before: count_matchings(g, k),
            after: count_matchings(&h, k),
        })
        .collect();
    let (a4_before, a4_after) = (a4_fast(g), a4_fast(&h));
    let distance = g.distance(u, v);
    let strict_decrease = matchings.iter().any(|c| c.after < c.before);
    let changed = matchings.iter().any(|c| c.after != c.before);
    let violations = CompressionViolations {
        matchings_increased: matchings.iter().any(|c| c.after > c.before),
        strictness: (split.u_only.is_empty() || split.v_only.is_empty()) && changed,
        a4_increased: distance.is_none_or(|d| d >= 2) && a4_after > a4_before,
    };
    Ok(VertexCompressionAudit {
        from: u,
        to: v,
        distance,
        split,
        matchings,
        a4_before,
        a4_after,
        compressed_connected: h.is_connected(),
        strict_decrease,
        violations,
    })
}

/// 1-based `(row, column)` position in a Young matrix.
pub type Position = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerSet {
    pub out_corners: Vec<Position>,
    pub in_corners: Vec<Position>,
}

pub fn corner_sets(y: &YoungMatrix) -> CornerSet {
    let r = y.rows();
    let h = r.len();
    let row = |i: usize| if i <= h { r[i - 1] } else { 0 };
    let out_corners = (1..=h)
        .filter(|&i| row(i + 1) < row(i))
        .map(|i| (i, row(i)))
        .collect();
    let in_corners = (2..=h)
        .filter(|&p| row(p - 1) > row(p))
        .map(|p| (p, row(p) + 1))
        .collect();
    CornerSet {
        out_corners,
        in_corners,
    }
}

fn grid_adjacent(a: Position, b: Position) -> bool {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1
}

/// Checks the preconditions of a corner move, reporting the first failure.
pub fn check_corner_move(y: &YoungMatrix, out: Position, inn: Position) -> Result<()> {
    let corners = corner_sets(y);
    if !corners.out_corners.contains(&out) {
        return Err(Error::Precondition(format!(
            "{out:?} is not an out-corner of {y}"
        )));
    }
    if !corners.in_corners.contains(&inn) {
        return Err(Error::Precondition(format!(
            "{inn:?} is not an in-corner of {y}"
        )));
    }
    if grid_adjacent(out, inn) {
        return Err(Error::Precondition(format!(
            "out-corner {out:?} and in-corner {inn:?} are adjacent"
        )));
    }
    Ok(())
}

/// Clears `out`, sets `inn`, and re-sorts the row sums. A row emptied by the
/// move is dropped (its vertex becomes isolated).
pub fn young_compress(y: &YoungMatrix, out: Position, inn: Position) -> Result<YoungMatrix> {
    check_corner_move(y, out, inn)?;
    let mut rows = y.rows().to_vec();
    rows[out.0 - 1] -= 1;
    rows[inn.0 - 1] += 1;
    rows.retain(|&r| r > 0);
    rows.sort_unstable_by(|a, b| b.cmp(a));
    YoungMatrix::new(rows)
}

/// `s(Y) - i·j`.
pub fn corner_matching_count(y: &YoungMatrix, out: Position) -> Result<i64> {
    if !corner_sets(y).out_corners.contains(&out) {
        return Err(Error::Precondition(format!(
            "{out:?} is not an out-corner of {y}"
        )));
    }
    Ok(y.sum() as i64 - (out.0 * out.1) as i64)
}

/// 2-matchings `{e, f}` through the edge `e` that lie in no quadrangle,
/// counted directly on the graph.
pub fn free_matchings_through(g: &Graph, e: (usize, usize)) -> Result<u64> {
    let (a, b) = e;
    if !g.has_edge(a, b) {
        return Err(Error::Domain(format!("{a}-{b} is not an edge")));
    }
    let mut count = 0;
    for (c, d) in g.edges() {
        if [c, d].iter().any(|&w| w == a || w == b) {
            continue;
        }
        let in_quadrangle =
            (g.has_edge(a, c) && g.has_edge(b, d)) || (g.has_edge(a, d) && g.has_edge(b, c));
        if !in_quadrangle {
            count += 1;
        }
    }
    Ok(count)
}

/// Graph edge of the Young-matrix cell `(i, j)` under
/// [`YoungMatrix::realize`] numbering.
pub fn cell_edge(y: &YoungMatrix, cell: Position) -> (usize, usize) {
    (cell.0 - 1, y.height() + cell.1 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CornerVerdict {
    /// `ij ≤ pq ⟹ a4 does not increase`.
    pub forward: bool,
    /// `a4 does not increase ⟹ ij ≤ pq`.
    pub converse: bool,
    /// `ij < pq ⟹ a4 strictly decreases`.
    pub strict: bool,
    /// Whether `a4(before) - a4(after) == ij - pq` happens to hold.
    pub difference_identity: bool,
}

impl CornerVerdict {
    fn new(ij: usize, pq: usize, before: i64, after: i64) -> Self {
        CornerVerdict {
            forward: ij > pq || before >= after,
            converse: before < after || ij <= pq,
            strict: ij >= pq || before > after,
            difference_identity: before - after == ij as i64 - pq as i64,
        }
    }

    pub fn consistent(&self) -> bool {
        self.forward && self.converse && self.strict
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerMoveRecord {
    pub instance: String,
    #[serde(rename = "move")]
    pub mv: String,
    pub result: String,
    pub ij: usize,
    pub pq: usize,
    pub before: i64,
    pub after: i64,
    pub verdict: CornerVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceRecord {
    pub instance: String,
    pub moves: Vec<String>,
    pub out_weight: usize,
    pub in_weight: usize,
    pub before: i64,
    pub after: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CornerAuditSummary {
    pub instances: usize,
    pub moves: usize,
    pub forward_failures: usize,
    pub converse_failures: usize,
    pub strict_failures: usize,
    pub identity_failures: usize,
    pub sequences: usize,
    /// Two-move sequences with `Σ a_i b_i > Σ c_i d_i` but no strict drop.
    pub sequence_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerAudit {
    pub note: &'static str,
    pub n_max: usize,
    pub summary: CornerAuditSummary,
    pub records: Vec<CornerMoveRecord>,
    pub sequence_counterexamples: Vec<SequenceRecord>,
}

pub const CORNER_AUDIT_MAX_N: usize = 12;

/// All legal single moves `(out, inn)` of `y`, in row-major order.
pub fn legal_moves(y: &YoungMatrix) -> Vec<(Position, Position)> {
    let c = corner_sets(y);
    let mut moves = Vec::new();
    for &o in &c.out_corners {
        for &i in &c.in_corners {
            if !grid_adjacent(o, i) {
                moves.push((o, i));
            }
        }
    }
    moves
}

/// One legal move on `y` with its a4 change and verdict.
pub fn corner_move_record(y: &YoungMatrix, o: Position, i: Position) -> Result<CornerMoveRecord> {
    let next = young_compress(y, o, i)?;
    let (before, after) = (a4_by_row_sums(y), a4_by_row_sums(&next));
    let (ij, pq) = (o.0 * o.1, i.0 * i.1);
    Ok(CornerMoveRecord {
        instance: y.to_string(),
        mv: fmt_move(o, i),
        result: next.to_string(),
        ij,
        pq,
        before,
        after,
        verdict: CornerVerdict::new(ij, pq, before, after),
    })
}

fn fmt_move(o: Position, i: Position) -> String {
    format!("({},{})->({},{})", o.0, o.1, i.0, i.1)
}

/// Every legal corner move on every Young matrix with `h + r_1 ≤ n_max`,
/// plus every two-move sequence. The a4 claim is audited, not assumed.
pub fn audit_corner_theorem(n_max: usize) -> Result<CornerAudit> {
    if n_max > CORNER_AUDIT_MAX_N {
        return Err(Error::Scale {
            what: "corner audit order",
            got: n_max,
            limit: CORNER_AUDIT_MAX_N,
        });
    }
    let mut summary = CornerAuditSummary::default();
    let mut records = Vec::new();
    let mut sequence_counterexamples = Vec::new();
    for y in partitions_in_box(n_max) {
        summary.instances += 1;
        let before = a4_by_row_sums(&y);
        for (o, i) in legal_moves(&y) {
            let next = young_compress(&y, o, i)?;
            let record = corner_move_record(&y, o, i)?;
            let (ij, pq, verdict) = (record.ij, record.pq, record.verdict);
            summary.moves += 1;
            summary.forward_failures += !verdict.forward as usize;
            summary.converse_failures += !verdict.converse as usize;
            summary.strict_failures += !verdict.strict as usize;
            summary.identity_failures += !verdict.difference_identity as usize;
            for (o2, i2) in legal_moves(&next) {
                let last = young_compress(&next, o2, i2)?;
                let final_a4 = a4_by_row_sums(&last);
                let out_weight = ij + o2.0 * o2.1;
                let in_weight = pq + i2.0 * i2.1;
                summary.sequences += 1;
                if out_weight > in_weight && final_a4 >= before {
                    summary.sequence_failures += 1;
                    sequence_counterexamples.push(SequenceRecord {
                        instance: y.to_string(),
                        moves: vec![fmt_move(o, i), fmt_move(o2, i2)],
                        out_weight,
                        in_weight,
                        before,
                        after: final_a4,
                    });
                }
            }
            records.push(record);
        }
    }
    Ok(CornerAudit {
        note: "corner-move rule audited for a4; verdicts are data",
        n_max,
        summary,
        records,
        sequence_counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::difference::young_matrix;
    use crate::graph::named::*;

    fn ym(s: &str) -> YoungMatrix {
        s.parse().unwrap()
    }

    // P5 as a-b-c-d-e = 0-1-2-3-4.
    #[test]
    fn split_examples() {
        let p5 = path(5);
        let s = neighbor_split(&p5, 1, 3).unwrap();
        assert_eq!(s.common, vec![2]);
        assert_eq!(s.u_only, vec![0]);
        assert_eq!(s.v_only, vec![4]);

        let k23 = complete_bipartite(2, 3);
        let s = neighbor_split(&k23, 0, 1).unwrap();
        assert!(s.u_only.is_empty() && s.v_only.is_empty());

        let s = neighbor_split(&complete(2), 0, 1).unwrap();
        assert!(s.common.is_empty() && s.u_only.is_empty() && s.v_only.is_empty());

        assert!(matches!(
            neighbor_split(&p5, 1, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            neighbor_split(&p5, 1, 9),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn compress_examples() {
        let p5 = path(5);
        let h = compress(&p5, 1, 3).unwrap();
        assert_eq!(
            h,
            Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (0, 3)]).unwrap()
        );
        assert_eq!((count_matchings(&p5, 2), count_matchings(&h, 2)), (3, 2));

        let k23 = complete_bipartite(2, 3);
        assert_eq!(compress(&k23, 0, 1).unwrap(), k23);

        // C6 on 1..6 is 0..5 here; compress(1 -> 3) is compress(0 -> 2).
        let c6 = cycle(6);
        let h = compress(&c6, 0, 2).unwrap();
        assert!(!h.has_edge(0, 5) && h.has_edge(2, 5));
        assert_eq!((a4_fast(&c6), a4_fast(&h)), (9, 6));
        assert_eq!(h.m(), 6);
    }

    #[test]
    fn adjacent_compression_keeps_the_uv_edge() {
        let p3 = path(3);
        let h = compress(&p3, 1, 0).unwrap();
        assert_eq!(h.m(), 2);
        assert!(h.has_edge(0, 1) && h.has_edge(0, 2));
    }

    #[test]
    fn audit_examples() {
        let a = audit_vertex_compression(&path(5), 1, 3, 2).unwrap();
        assert_eq!(
            a.matchings[1],
            MatchingComparison {
                k: 2,
                before: 3,
                after: 2
            }
        );
        assert!(!a.violations.any());
        assert_eq!(a.distance, Some(2));

        let a = audit_vertex_compression(&complete_bipartite(2, 3), 2, 3, 3).unwrap();
        assert!(a.matchings.iter().all(|c| c.before == c.after));
        assert!(!a.violations.any() && !a.strict_decrease);

        let a = audit_vertex_compression(&cycle(6), 0, 2, 2).unwrap();
        assert_eq!((a.a4_before, a.a4_after, a.distance), (9, 6, Some(2)));
        assert!(!a.violations.any() && a.compressed_connected);
    }

    #[test]
    fn corner_examples() {
        let c = corner_sets(&ym("3,1,1"));
        assert_eq!(c.out_corners, vec![(1, 3), (3, 1)]);
        assert_eq!(c.in_corners, vec![(2, 2)]);
        let c = corner_sets(&ym("2,2,1,1"));
        assert_eq!(c.out_corners, vec![(2, 2), (4, 1)]);
        assert_eq!(c.in_corners, vec![(3, 2)]);
        let c = corner_sets(&ym("4,4,4"));
        assert_eq!(c.out_corners, vec![(3, 4)]);
        assert!(c.in_corners.is_empty());
    }

    #[test]
    fn young_compress_examples() {
        assert_eq!(
            young_compress(&ym("3,1,1"), (1, 3), (2, 2)).unwrap(),
            ym("2,2,1")
        );
        assert!(matches!(
            young_compress(&ym("2,2,1,1"), (2, 2), (3, 2)),
            Err(Error::Precondition(msg)) if msg.contains("adjacent")
        ));
        assert_eq!(
            young_compress(&ym("4,2,1"), (1, 4), (3, 2)).unwrap(),
            ym("3,2,2")
        );
        assert!(matches!(
            young_compress(&ym("4,2,1"), (1, 3), (3, 2)),
            Err(Error::Precondition(msg)) if msg.contains("out-corner")
        ));
        assert!(matches!(
            young_compress(&ym("4,2,1"), (1, 4), (3, 3)),
            Err(Error::Precondition(msg)) if msg.contains("in-corner")
        ));
        // Removing the last cell of the bottom row drops that row.
        assert_eq!(
            young_compress(&ym("3,1,1"), (3, 1), (2, 2)).unwrap(),
            ym("3,2")
        );
    }

    #[test]
    fn corner_count_examples() {
        for (rows, out, expected) in [
            ("3,1,1", (1, 3), 2),
            ("2,2,1,1", (2, 2), 2),
            ("1", (1, 1), 0),
        ] {
            let y = ym(rows);
            assert_eq!(corner_matching_count(&y, out).unwrap(), expected);
            let g = y.realize().unwrap();
            assert_eq!(
                free_matchings_through(&g, cell_edge(&y, out)).unwrap(),
                expected as u64
            );
        }
        assert!(corner_matching_count(&ym("3,1,1"), (2, 1)).is_err());
    }

    #[test]
    fn corner_audit_small() {
        let audit = audit_corner_theorem(6).unwrap();
        let rec = audit
            .records
            .iter()
            .find(|r| r.instance == "3,1,1" && r.mv == "(1,3)->(2,2)")
            .unwrap();
        assert_eq!((rec.before, rec.after, rec.ij, rec.pq), (4, 2, 3, 4));
        assert!(rec.verdict.forward);
        assert!(!rec.verdict.difference_identity);
        // Rectangles contribute instances but no moves.
        assert!(!audit.records.iter().any(|r| r.instance == "3,3"));
        assert!(audit_corner_theorem(13).is_err());
    }

    #[test]
    fn realized_young_matrix_matches_eigenvector() {
        let ev = "1,2;1,2".parse().unwrap();
        let y = young_matrix(&ev);
        assert_eq!(a4_fast(&y.realize().unwrap()), a4_by_row_sums(&y));
    }
}
