//! Linear connectivity in uniform hypergraphs.
//!
//! A `q`-linear path is a sequence of edges where consecutive edges share
//! between 1 and `q` vertices and all other pairs are disjoint. For
//! `q = k-2` in a `k`-uniform hypergraph the component of a vertex is
//! computed exactly in polynomial time by [`partition_archipelago`]; the
//! [`oracle`] module provides exhaustive ground truth for small inputs, and
//! [`pafp`] connects the problem to Paths Avoiding Forbidden Pairs on
//! bicolored line graphs.

pub mod archipelago;
pub mod dot;
pub mod gen;
pub mod hypergraph;
pub mod oracle;
pub mod pafp;
pub mod path;
pub mod report;
pub mod verify;

pub use archipelago::{
    lcc, lcc_any_rank, partition_archipelago, Archipelago, ArchipelagoError, EdgeClass,
    EdgePartition, Island, IslandId,
};
pub use hypergraph::{serialize, Hypergraph, HypergraphError, ParseError, VertexId, VertexSet};
pub use oracle::{Oracle, OracleError};
pub use pafp::{
    line_graph, pafp_exact, screen_forbidden, solve_pafp_via_hypergraph, BicoloredGraph,
};
pub use path::{is_extendable, is_path_from_to, is_q_linear, EdgeSeq, PathQuery};
