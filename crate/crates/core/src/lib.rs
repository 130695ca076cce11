//! Exact combinatorics of the fourth adjacency coefficient `a_4` over
//! connected bipartite graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: bitset graphs, edge-list and graph6 I/O.
//! - [`coefficients`]: matchings, short cycles, Sachs enumeration and the
//!   exact characteristic polynomial.
//! - [`difference`]: difference graphs, Young matrices, characteristic
//!   matrices and three structural a4 formulas.
//! - [`compression`]: vertex compression, Young-matrix corner moves and
//!   their audits.
//! - [`search`]: isomorph-free enumeration of connected bipartite
//!   `(n, m)`-graphs, minimal a4 and closed-form audits.
//! - [`partition`]: the row-sum program over constrained partitions.

pub mod coefficients;
pub mod compression;
pub mod difference;
pub mod error;
pub mod graph;
pub mod partition;
pub mod random;
pub mod search;

pub use coefficients::{
    a4_fast, charpoly_coefficients, count_matchings, count_short_cycles, sachs_coefficient,
    CoefficientVector, ShortCycles,
};
pub use difference::{
    a4_by_blocks, a4_by_char_matrix, a4_by_row_sums, characteristic_matrix, difference_complement,
    eigenvector_of, is_difference, is_difference_by_p5, realize, young_matrix,
    CharacteristicMatrix, VertexEigenvector, YoungMatrix,
};
pub use error::{Error, Result};
pub use graph::{Graph, GraphFormat, Membership};
pub use partition::{enumerate_feasible, objective, solve, RowSumVector};
pub use search::{
    enumerate_bipartite, enumerate_eigenvectors, min_a4_bruteforce, min_a4_difference,
    paper_closed_form, structural_predicates, verify_range, SearchReport,
};
