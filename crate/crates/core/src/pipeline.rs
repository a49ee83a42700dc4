use std::time::{Duration, Instant};

use crate::error::Error;
use crate::graph::{connectivity_check, Graph, VertexId};
use crate::kruskal::{kruskal, MstResult};
use crate::replace::{
    most_vital_edge, scan_replacements, PathLabelCall, ReplacementTable, ScanOptions,
    VitalEdgeReport,
};
use crate::static_union::OpStats;
use crate::tree::{build_tree_index, TreeIndex};
use crate::weight::Weight;

/// Wall-clock time spent in each phase of `analyze`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimings {
    /// Edge sort plus spanning tree construction.
    pub sort_kruskal: Duration,
    /// Rooted index build (parents, traversal labels).
    pub index_build: Duration,
    /// Replacement scan over non-tree edges.
    pub scan: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.sort_kruskal + self.index_build + self.scan
    }
}

/// Everything the analysis produces for one graph, plus how long each
/// phase took.
pub struct Analysis<W> {
    pub mst: MstResult<W>,
    pub tree: TreeIndex,
    pub table: ReplacementTable,
    pub stats: OpStats,
    pub dsu_steps: u64,
    pub scanned: usize,
    pub trace: Option<Vec<PathLabelCall>>,
    pub vital: VitalEdgeReport<W>,
    pub timings: PhaseTimings,
}

/// Full pipeline: spanning tree, rooted index, replacement scan, most
/// vital edge. Validates emptiness and connectivity up front so callers
/// get typed errors instead of a panic mid-phase.
pub fn analyze<W: Weight>(
    g: &Graph<W>,
    root: VertexId,
    opts: &ScanOptions,
) -> Result<Analysis<W>, Error> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    assert!(root < g.n(), "root {root} out of range for {} vertices", g.n());
    if !connectivity_check(g) {
        return Err(Error::NotConnected);
    }

    let t0 = Instant::now();
    let mst = kruskal(g)?;
    let t1 = Instant::now();
    let tree = build_tree_index(g, &mst, root);
    let t2 = Instant::now();
    let outcome = scan_replacements(g, &mst, &tree, opts);
    let t3 = Instant::now();

    let vital = most_vital_edge(g, &outcome.table);

    Ok(Analysis {
        mst,
        tree,
        table: outcome.table,
        stats: outcome.stats,
        dsu_steps: outcome.dsu_steps,
        scanned: outcome.scanned,
        trace: outcome.trace,
        vital,
        timings: PhaseTimings {
            sort_kruskal: t1 - t0,
            index_build: t2 - t1,
            scan: t3 - t2,
        },
    })
}
