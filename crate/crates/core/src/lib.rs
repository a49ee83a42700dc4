//! Minimum spanning tree sensitivity analysis.
//!
//! Given a connected, undirected, weighted graph, this crate computes a
//! minimum spanning tree and then, for every tree edge, the cheapest
//! non-tree edge that would reconnect the tree if that edge failed (its
//! *replacement edge*). Tree edges with no replacement are bridges of the
//! graph. On top of the replacement table it reports the *most vital*
//! tree edge: the edge whose failure increases the spanning tree weight
//! the most.
//!
//! The replacement scan runs in linear time after the edge sort. It walks
//! each non-tree edge's cycle from both endpoints using interval labels
//! from one rooted traversal, assigns replacements on first touch, and
//! compresses finished subpaths with a static-tree disjoint-set structure
//! so no tree edge is walked twice. Two interchangeable disjoint-set
//! engines are provided: a compressed-jump reference and a word-packed
//! microset engine ([`DsuEngine`]); they produce identical tables and the
//! scan counts their operations so the linearity is checkable, not just
//! claimed.
//!
//! Everything is generic over the integer weight type through the
//! [`Weight`] trait; [`W64`]/[`Graph64`] fix the common 64-bit case.
//!
//! # Quick start
//!
//! ```
//! use mstsense::{analyze, parse_graph, Replacement, ScanOptions, W64};
//!
//! let text = "4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n";
//! let g = parse_graph::<W64>(text.as_bytes()).unwrap();
//! let a = analyze(&g, 0, &ScanOptions::default()).unwrap();
//! assert_eq!(a.mst.total_weight, 6);
//! // Losing any tree edge of the cycle is repaired by the heaviest edge.
//! assert_eq!(a.table.replacement(0), Some(Replacement::Edge(3)));
//! // Edge 0 costs the most to lose: its replacement is 3 heavier.
//! assert_eq!(a.vital.edge, Some(0));
//! assert_eq!(a.vital.delta, Some(3));
//! ```

pub mod error;
pub mod gen;
pub mod graph;
pub mod kruskal;
pub mod oracle;
pub mod pipeline;
pub mod replace;
pub mod static_union;
pub mod tree;
pub mod weight;

pub use error::Error;
pub use gen::{generate, Family, GenSpec, Generated};
pub use graph::{
    connectivity_check, parse_graph, sort_edges, write_graph, Edge, EdgeId, EdgeKey, Graph,
    VertexId,
};
pub use kruskal::{kruskal, MstResult};
pub use oracle::{oracle_analyze, oracle_find, oracle_replacements, oracle_vital, OracleResult};
pub use pipeline::{analyze, Analysis, PhaseTimings};
pub use replace::{
    bridges, find_replacement_edges, most_vital_edge, path_label, scan_replacements, Plan,
    PathLabelCall, Replacement, ReplacementTable, ScanOptions, ScanOutcome, VitalEdgeReport,
};
pub use static_union::{DsuEngine, OpStats, StaticUnion};
pub use tree::{build_tree_index, TreeIndex, NO_PARENT_EDGE};
pub use weight::Weight;

/// Default weight type for the command line and the generator.
pub type W64 = i64;
/// Graph over the default weight type.
pub type Graph64 = Graph<W64>;
/// Spanning tree result over the default weight type.
pub type Mst64 = MstResult<W64>;
/// Analysis result over the default weight type.
pub type Analysis64 = Analysis<W64>;
