//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is one `u64` row per vertex, so neighbourhood intersections and
//! degree counts are single word operations. Two text formats are supported:
//! the plain edge-list document and (behind [`GraphFormat::Graph6`]) graph6.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Iterate over the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[inline]
pub fn bit(v: usize) -> u64 {
    1u64 << v
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?})",
            self.n,
            self.edges().collect::<Vec<_>>()
        )
    }
}

impl Graph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Scale {
                what: "vertex count",
                got: n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n,
            m: 0,
            adj: vec![0; n],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::Domain(format!("no edge {u}-{v} to remove")));
        }
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
        self.m -= 1;
        Ok(())
    }

    /// Builds a graph from raw adjacency rows, validating every invariant.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let full = full_mask(n);
        let mut total = 0usize;
        for (u, &row) in rows.iter().enumerate() {
            if row & !full != 0 {
                let v = (row & !full).trailing_zeros() as usize;
                return Err(Error::Range { vertex: v, n });
            }
            if row & bit(u) != 0 {
                return Err(Error::SelfLoop(u));
            }
            for v in bits(row) {
                if rows[v] & bit(u) == 0 {
                    return Err(Error::Domain(format!("asymmetric adjacency at {u}-{v}")));
                }
            }
            total += row.count_ones() as usize;
        }
        g.adj = rows;
        g.m = total / 2;
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::Range {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> u64 {
        self.adj[u]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn component_of(&self, start: usize, within: u64) -> u64 {
        let mut seen = bit(start);
        let mut frontier = bit(start);
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, self.vertex_mask()) == self.vertex_mask()
    }

    /// Breadth-first distance, `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        let mut seen = bit(u);
        let mut frontier = bit(u);
        let mut d = 0;
        while frontier != 0 {
            if frontier & bit(v) != 0 {
                return Some(d);
            }
            let mut next = 0;
            for w in bits(frontier) {
                next |= self.adj[w];
            }
            next &= !seen;
            seen |= next;
            frontier = next;
            d += 1;
        }
        None
    }

    /// Two-colouring of every component, with each component's lowest
    /// vertex on side A. `None` when some component has an odd cycle.
    pub fn bipartition(&self) -> Option<(u64, u64)> {
        let all = self.vertex_mask();
        let mut side_a = 0u64;
        let mut side_b = 0u64;
        let mut unvisited = all;
        while unvisited != 0 {
            let root = unvisited.trailing_zeros() as usize;
            let mut layer = bit(root);
            let mut on_a = true;
            let mut seen = layer;
            while layer != 0 {
                if on_a {
                    side_a |= layer;
                } else {
                    side_b |= layer;
                }
                let mut next = 0;
                for v in bits(layer) {
                    next |= self.adj[v];
                }
                next &= !seen;
                seen |= next;
                layer = next;
                on_a = !on_a;
            }
            unvisited &= !seen;
        }
        for u in bits(side_a) {
            if self.adj[u] & side_a != 0 {
                return None;
            }
        }
        for u in bits(side_b) {
            if self.adj[u] & side_b != 0 {
                return None;
            }
        }
        Some((side_a, side_b))
    }

    /// Connectivity and bipartiteness in one record.
    pub fn membership(&self) -> Membership {
        Membership {
            connected: self.is_connected(),
            bipartition: self
                .bipartition()
                .map(|(a, b)| (bits(a).collect(), bits(b).collect())),
        }
    }

    /// True when `self` is a connected bipartite graph.
    pub fn is_connected_bipartite(&self) -> bool {
        self.is_connected() && self.bipartition().is_some()
    }

    /// Graph obtained by relabelling vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Domain("permutation length mismatch".into()));
        }
        let mut rows = vec![0u64; self.n];
        for u in 0..self.n {
            for v in bits(self.adj[u]) {
                rows[perm[u]] |= bit(perm[v]);
            }
        }
        Graph::from_rows(rows)
    }

    /// Edge-list document: header `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut g = Graph::empty(n).map_err(|e| match e {
            Error::Domain(msg) => Error::Parse { line: hline, msg },
            other => other,
        })?;
        let mut seen = 0;
        for (lineno, line) in lines {
            if seen == m {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("more than the declared {m} edge lines"),
                });
            }
            let (u, v) = parse_pair(lineno, line)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(Error::Range {
                    vertex: u.max(v),
                    n,
                });
            }
            g.add_edge(u, v)?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: format!("declared {m} edges but found {seen}"),
            });
        }
        Ok(g)
    }

    /// Standard graph6 encoding (no header).
    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut used = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                used += 1;
                if used == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            out.push((acc << (6 - used)) + 63);
        }
        String::from_utf8(out).expect("graph6 is ASCII")
    }

    pub fn parse_graph6(text: &str) -> Result<Graph> {
        let s = text.trim_end_matches(['\n', '\r']);
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        if bytes.is_empty() {
            return Err(bad("empty graph6 string"));
        }
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(bad("graph6 byte outside 63..=126"));
        }
        let (n, body) = if bytes[0] != 126 {
            ((bytes[0] - 63) as usize, &bytes[1..])
        } else {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(bad("unsupported graph6 size prefix"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        };
        let pairs = n * n.saturating_sub(1) / 2;
        if body.len() != pairs.div_ceil(6) {
            return Err(bad("graph6 body length does not match vertex count"));
        }
        let mut g = Graph::empty(n).map_err(|e| match e {
            Error::Domain(msg) => bad(&msg),
            other => other,
        })?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if byte & (1 << (5 - k % 6)) != 0 {
                    g.add_edge(i, j)?;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Graph> {
        match format {
            GraphFormat::EdgeList => Graph::parse_edge_list(text),
            GraphFormat::Graph6 => Graph::parse_graph6(text),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
    Graph6,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(GraphFormat::EdgeList),
            "graph6" => Ok(GraphFormat::Graph6),
            other => Err(Error::Domain(format!("unknown graph format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub connected: bool,
    pub bipartition: Option<(Vec<usize>, Vec<usize>)>,
}

#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn low_mask(k: usize) -> u64 {
    full_mask(k)
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut parts = text.split(' ');
    let mut next = || -> Result<usize> {
        let tok = parts
            .next()
            .ok_or_else(|| err(format!("expected two integers, got {text:?}")))?;
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(format!("malformed integer {tok:?}")));
        }
        tok.parse()
            .map_err(|_| err(format!("integer out of range {tok:?}")))
    };
    let a = next()?;
    let b = next()?;
    if parts.next().is_some() {
        return Err(err(format!("trailing fields in {text:?}")));
    }
    Ok((a, b))
}

/// Common small graphs used across tests and examples.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("path")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).expect("cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete")
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("complete bipartite")
    }

    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }
}
