use std::fmt;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::kruskal::MstResult;
use crate::static_union::{DsuEngine, OpStats, StaticUnion};
use crate::tree::TreeIndex;
use crate::weight::Weight;

/// Which side of the walk a cycle traversal takes, decided from the step
/// labels of the non-tree edge's endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plan {
    Anc,
    Left,
    Right,
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Anc => write!(f, "ANC"),
            Plan::Left => write!(f, "LEFT"),
            Plan::Right => write!(f, "RIGHT"),
        }
    }
}

/// Per-call trace record. `plan = None` means the call returned at the
/// guard because the start vertex is an ancestor of the target, so no walk
/// happened. `assigned` lists the tree edges this call answered, in walk
/// order; it is only populated when the caller asked for tracing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLabelCall {
    pub edge: EdgeId,
    pub plan: Option<Plan>,
    pub assigned: Vec<EdgeId>,
}

impl fmt::Display for PathLabelCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={} plan=", self.edge)?;
        match self.plan {
            Some(p) => write!(f, "{p}")?,
            None => write!(f, "SKIP")?,
        }
        write!(f, " assigned=[")?;
        for (i, eid) in self.assigned.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{eid}")?;
        }
        write!(f, "]")
    }
}

/// Replacement answer for one tree edge, total after a full scan: either
/// the first non-tree edge whose cycle covers it, or a bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replacement {
    Edge(EdgeId),
    Bridge,
}

/// Replacement assignments, reported in canonical (ascending EdgeKey) tree
/// order. An entry is written at most once; the scan processes non-tree
/// edges in ascending key order, so the first write is the minimum
/// replacement.
///
/// Internally the answers are keyed by the child vertex of each tree edge
/// (the rooted tree makes that a bijection), because the walk produces the
/// vertex for free: recording an answer is then one array write, with no
/// edge-id lookups on the hot path. The edge-keyed views translate through
/// maps built once here.
pub struct ReplacementTable {
    tree_order: Vec<EdgeId>,
    /// Per tree edge (in tree_order): its child vertex.
    child_of: Vec<u32>,
    /// Per edge id: position in tree_order, or NO_SLOT for non-tree edges.
    slot_of: Vec<u32>,
    /// Per vertex: assigned replacement edge id, or EMPTY. Root unused.
    by_vertex: Vec<u32>,
    root: VertexId,
    assigned: usize,
}

const NO_SLOT: u32 = u32::MAX;
const EMPTY: u32 = u32::MAX;

impl ReplacementTable {
    pub fn new<W: Weight>(g: &Graph<W>, mst: &MstResult<W>, ti: &TreeIndex) -> Self {
        assert!(g.m() < u32::MAX as usize, "edge count exceeds replacement id width");
        let mut slot_of = vec![NO_SLOT; g.m()];
        for (i, &eid) in mst.tree_edges.iter().enumerate() {
            slot_of[eid] = i as u32;
        }
        let mut child_of = vec![0u32; mst.tree_edges.len()];
        for v in 0..g.n() {
            if v != ti.root {
                child_of[slot_of[ti.parent_eid[v]] as usize] = v as u32;
            }
        }
        ReplacementTable {
            tree_order: mst.tree_edges.clone(),
            child_of,
            slot_of,
            by_vertex: vec![EMPTY; g.n()],
            root: ti.root,
            assigned: 0,
        }
    }

    /// Records `replacement` as the answer for the tree edge between `v`
    /// and its parent.
    fn assign(&mut self, v: VertexId, replacement: EdgeId) {
        assert!(v != self.root, "the root has no parent edge to assign");
        let cell = &mut self.by_vertex[v];
        assert!(*cell == EMPTY, "replacement above vertex {v} assigned twice");
        *cell = replacement as u32;
        self.assigned += 1;
    }

    pub fn assigned_count(&self) -> usize {
        self.assigned
    }

    /// Post-scan view: unassigned means no cycle ever covered the edge,
    /// which is exactly the bridge condition.
    pub fn replacement(&self, tree_eid: EdgeId) -> Option<Replacement> {
        match self.slot_of.get(tree_eid) {
            Some(&slot) if slot != NO_SLOT => {
                let got = self.by_vertex[self.child_of[slot as usize] as usize];
                Some(if got == EMPTY { Replacement::Bridge } else { Replacement::Edge(got as EdgeId) })
            }
            _ => None,
        }
    }

    /// (tree edge, answer) pairs in canonical tree order.
    pub fn entries(&self) -> impl Iterator<Item = (EdgeId, Replacement)> + '_ {
        self.tree_order.iter().zip(self.child_of.iter()).map(|(&eid, &child)| {
            let got = self.by_vertex[child as usize];
            (
                eid,
                if got == EMPTY { Replacement::Bridge } else { Replacement::Edge(got as EdgeId) },
            )
        })
    }
}

/// One directed walk along the cycle of non-tree edge `e = {s, t}`,
/// starting at `s` and climbing toward the point where the two root paths
/// meet. The step labels steer everything:
///
/// * If `s` is an ancestor of `t` there is nothing on this side; return.
/// * If `t` is an ancestor of `s`, walk until the in-label passes `t`'s.
/// * Otherwise the meeting point is a proper fork; whichever of the two
///   label windows applies tells the walk when it has passed the fork
///   without ever computing the fork vertex.
///
/// Every set label met on the way is an unassigned tree edge {v, parent};
/// it gets `e` and is linked away so no later walk pays for it again.
/// Labels are read through `StaticUnion::window`, which serves them from
/// the cell `find` is about to touch anyway.
fn path_label_impl(
    ti: &TreeIndex,
    su: &mut StaticUnion<'_>,
    rt: &mut ReplacementTable,
    s: VertexId,
    t: VertexId,
    e: EdgeId,
    opts: &ScanOptions,
) -> PathLabelCall {
    let (s_in, s_out) = su.window(s);
    let (t_in, t_out) = su.window(t);

    if s_in < t_in && t_in < s_out {
        return PathLabelCall { edge: e, plan: None, assigned: Vec::new() };
    }

    let (plan, mut k1, mut k2) = if t_in < s_in && s_in < t_out {
        (Plan::Anc, t_in, s_in)
    } else if s_in < t_in {
        (Plan::Left, s_out, t_in)
    } else {
        (Plan::Right, t_out, s_in)
    };

    let mut assigned = Vec::new();
    let mut v = s;
    while k1 < k2 {
        su.record_loop_iteration();
        if su.find(v) == v {
            rt.assign(v, e);
            if opts.record_trace {
                assigned.push(ti.parent_eid[v]);
            }
            su.link(v);
        }
        v = su.find(v);
        let (v_in, v_out) = su.window(v);
        match plan {
            Plan::Anc | Plan::Right => k2 = v_in,
            Plan::Left => {
                k1 = if opts.fault_left_k1 { v_in } else { v_out };
            }
        }
    }

    PathLabelCall { edge: e, plan: Some(plan), assigned }
}

/// Single-call entry point for one cycle walk.
pub fn path_label(
    ti: &TreeIndex,
    su: &mut StaticUnion<'_>,
    rt: &mut ReplacementTable,
    s: VertexId,
    t: VertexId,
    e: EdgeId,
) -> PathLabelCall {
    let opts = ScanOptions { record_trace: true, ..ScanOptions::default() };
    path_label_impl(ti, su, rt, s, t, e, &opts)
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub engine: DsuEngine,
    /// Stop once every non-bridge tree edge has its answer. Costs one
    /// bridge pass up front; the resulting table is identical.
    pub early_exit: bool,
    /// Keep a `PathLabelCall` record per call (two per scanned edge).
    pub record_trace: bool,
    /// Deliberately corrupts the LEFT-plan walk. Exists so tests can prove
    /// the verifier catches a broken engine; never set it for real work.
    #[doc(hidden)]
    pub fault_left_k1: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            engine: DsuEngine::GabowTarjan,
            early_exit: false,
            record_trace: false,
            fault_left_k1: false,
        }
    }
}

pub struct ScanOutcome {
    pub table: ReplacementTable,
    pub stats: OpStats,
    /// Engine-internal step counter, see `StaticUnion::elementary_steps`.
    pub dsu_steps: u64,
    pub trace: Option<Vec<PathLabelCall>>,
    /// Non-tree edges actually processed (early exit can stop short).
    pub scanned: usize,
}

/// Scans non-tree edges in ascending EdgeKey order and walks both sides of
/// each cycle. First-touch assignment plus the ascending order makes every
/// entry the minimum-key replacement for its tree edge.
pub fn scan_replacements<W: Weight>(
    g: &Graph<W>,
    mst: &MstResult<W>,
    ti: &TreeIndex,
    opts: &ScanOptions,
) -> ScanOutcome {
    assert!(g.n() >= 1);
    let mut su = StaticUnion::new(ti, opts.engine);
    for v in 0..g.n() {
        su.makeset(v);
    }
    let mut rt = ReplacementTable::new(g, mst, ti);
    let target = if opts.early_exit {
        g.n() - 1 - bridges(g).len()
    } else {
        usize::MAX
    };
    let mut trace = if opts.record_trace { Some(Vec::new()) } else { None };
    let mut scanned = 0;

    // The flat endpoint stream emitted by kruskal reads sequentially, so
    // each endpoint's data can be warmed ahead of its walk in two prefetch
    // stages: far ahead for the per-vertex cells (window labels + engine
    // pointer share a line), near ahead for the engine record that pointer
    // addresses, which needs the cell load to have landed first.
    let nontree = &mst.nontree_sorted;
    let pairs = &mst.nontree_pairs;
    const FAR: usize = 16;
    const NEAR: usize = 3;

    for (j, &eid) in nontree.iter().enumerate() {
        if rt.assigned_count() >= target {
            break;
        }
        scanned += 1;
        if let Some(&(pu, pv)) = pairs.get(j + FAR) {
            su.prefetch_entry(pu as VertexId);
            su.prefetch_entry(pv as VertexId);
        }
        if let Some(&(pu, pv)) = pairs.get(j + NEAR) {
            su.prefetch_record(pu as VertexId);
            su.prefetch_record(pv as VertexId);
        }
        let (u, v) = pairs[j];
        let (u, v) = (u as VertexId, v as VertexId);
        let first = path_label_impl(ti, &mut su, &mut rt, u, v, eid, opts);
        let second = path_label_impl(ti, &mut su, &mut rt, v, u, eid, opts);
        if let Some(tr) = trace.as_mut() {
            tr.push(first);
            tr.push(second);
        }
    }

    ScanOutcome {
        stats: su.stats(),
        dsu_steps: su.elementary_steps(),
        table: rt,
        trace,
        scanned,
    }
}

/// Convenience entry point: builds the rooted index and returns just the
/// replacement table.
pub fn find_replacement_edges<W: Weight>(
    g: &Graph<W>,
    mst: &MstResult<W>,
    root: VertexId,
    opts: &ScanOptions,
) -> ReplacementTable {
    let ti = crate::tree::build_tree_index(g, mst, root);
    scan_replacements(g, mst, &ti, opts).table
}

/// All bridge edge ids, ascending. Lowpoint search, iterative, and keyed
/// by entry edge id rather than parent vertex so one edge of a parallel
/// pair is a back edge for the other: a parallel pair is never a bridge.
pub fn bridges<W: Weight>(g: &Graph<W>) -> Vec<EdgeId> {
    const UNSET: u32 = u32::MAX;
    const NO_ENTRY: EdgeId = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSET; n];
    let mut low = vec![UNSET; n];
    let mut is_bridge = vec![false; g.m()];
    let mut timer: u32 = 0;

    // (vertex, entry edge id, cursor into neighbors)
    let mut stack: Vec<(VertexId, EdgeId, usize)> = Vec::new();
    for start in 0..n {
        if disc[start] != UNSET {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        stack.push((start, NO_ENTRY, 0));

        while let Some(frame) = stack.last_mut() {
            let (v, entry, cursor) = (frame.0, frame.1, frame.2);
            let nbrs = g.neighbors(v);
            if cursor < nbrs.len() {
                frame.2 += 1;
                let (to, eid) = nbrs[cursor];
                if eid == entry {
                    continue;
                }
                if disc[to] == UNSET {
                    disc[to] = timer;
                    low[to] = timer;
                    timer += 1;
                    stack.push((to, eid, 0));
                } else if disc[to] < low[v] {
                    low[v] = disc[to];
                }
            } else {
                stack.pop();
                if let Some(parent) = stack.last() {
                    let p = parent.0;
                    if low[v] < low[p] {
                        low[p] = low[v];
                    }
                    if low[v] > disc[p] {
                        is_bridge[entry] = true;
                    }
                }
            }
        }
    }

    (0..g.m()).filter(|&eid| is_bridge[eid]).collect()
}

/// Most vital tree edge: the one whose removal raises the spanning weight
/// the most, i.e. argmax of replacement weight minus own weight. Undefined
/// as soon as any tree edge is a bridge (removal would disconnect, there
/// is no finite answer), and for the edgeless single-vertex tree. Ties go
/// to the smaller tree EdgeKey, which the canonical entry order delivers
/// for free with a strict comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VitalEdgeReport<W> {
    pub defined: bool,
    pub edge: Option<EdgeId>,
    pub delta: Option<W>,
    pub bridge_count: usize,
}

pub fn most_vital_edge<W: Weight>(g: &Graph<W>, rt: &ReplacementTable) -> VitalEdgeReport<W> {
    let bridge_count = rt.entries().filter(|(_, r)| *r == Replacement::Bridge).count();
    if bridge_count > 0 {
        return VitalEdgeReport { defined: false, edge: None, delta: None, bridge_count };
    }

    let mut best: Option<(EdgeId, W)> = None;
    for (tree_eid, r) in rt.entries() {
        let Replacement::Edge(repl) = r else { unreachable!() };
        let delta = g
            .edge(repl)
            .w
            .checked_sub(&g.edge(tree_eid).w)
            .expect("weight delta overflows the weight type");
        match best {
            Some((_, d)) if delta <= d => {}
            _ => best = Some((tree_eid, delta)),
        }
    }

    match best {
        Some((eid, delta)) => VitalEdgeReport {
            defined: true,
            edge: Some(eid),
            delta: Some(delta),
            bridge_count: 0,
        },
        None => VitalEdgeReport { defined: false, edge: None, delta: None, bridge_count: 0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::kruskal::kruskal;
    use crate::tree::build_tree_index;

    fn setup(s: &str, root: usize) -> (Graph<i64>, MstResult<i64>, TreeIndex) {
        let g = parse_graph::<i64>(s.as_bytes()).unwrap();
        let mst = kruskal(&g).unwrap();
        let ti = build_tree_index(&g, &mst, root);
        (g, mst, ti)
    }

    fn table_of(s: &str, root: usize) -> Vec<(EdgeId, Replacement)> {
        let (g, mst, ti) = setup(s, root);
        scan_replacements(&g, &mst, &ti, &ScanOptions::default()).table.entries().collect()
    }

    #[test]
    fn four_cycle_all_replaced_by_heaviest() {
        let entries = table_of("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n", 0);
        assert_eq!(
            entries,
            vec![
                (0, Replacement::Edge(3)),
                (1, Replacement::Edge(3)),
                (2, Replacement::Edge(3)),
            ]
        );
    }

    #[test]
    fn pure_tree_is_all_bridges() {
        let entries = table_of("3 2\n0 1 1\n1 2 2\n", 0);
        assert_eq!(entries, vec![(0, Replacement::Bridge), (1, Replacement::Bridge)]);
    }

    #[test]
    fn parallel_edge_replaces_its_twin() {
        let entries = table_of("2 2\n0 1 1\n0 1 7\n", 0);
        assert_eq!(entries, vec![(0, Replacement::Edge(1))]);
    }

    #[test]
    fn both_engines_same_table() {
        let s = "6 9\n0 1 3\n1 2 5\n2 3 1\n3 4 9\n4 5 2\n5 0 8\n1 4 4\n2 5 7\n0 3 6\n";
        let (g, mst, ti) = setup(s, 0);
        for early in [false, true] {
            let a = scan_replacements(
                &g,
                &mst,
                &ti,
                &ScanOptions { engine: DsuEngine::Reference, early_exit: early, ..Default::default() },
            );
            let b = scan_replacements(
                &g,
                &mst,
                &ti,
                &ScanOptions { engine: DsuEngine::GabowTarjan, early_exit: early, ..Default::default() },
            );
            let ea: Vec<_> = a.table.entries().collect();
            let eb: Vec<_> = b.table.entries().collect();
            assert_eq!(ea, eb);
            assert_eq!(a.stats.finds, b.stats.finds);
            assert_eq!(a.stats.links, b.stats.links);
        }
    }

    #[test]
    fn early_exit_same_table_fewer_edges() {
        // Heavy tail edges that assign nothing once the table is full.
        let s = "4 6\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n0 2 50\n1 3 60\n";
        let (g, mst, ti) = setup(s, 0);
        let full = scan_replacements(&g, &mst, &ti, &ScanOptions::default());
        let early = scan_replacements(
            &g,
            &mst,
            &ti,
            &ScanOptions { early_exit: true, ..Default::default() },
        );
        let a: Vec<_> = full.table.entries().collect();
        let b: Vec<_> = early.table.entries().collect();
        assert_eq!(a, b);
        assert_eq!(full.scanned, 3);
        assert_eq!(early.scanned, 1);
    }

    #[test]
    fn single_vertex_scan_is_empty() {
        let (g, mst, ti) = setup("1 0\n", 0);
        let out = scan_replacements(&g, &mst, &ti, &ScanOptions::default());
        assert_eq!(out.table.entries().count(), 0);
        assert_eq!(out.stats.makesets, 1);
    }

    #[test]
    fn bridge_examples() {
        let path = parse_graph::<i64>("4 3\n0 1 1\n1 2 1\n2 3 1\n".as_bytes()).unwrap();
        assert_eq!(bridges(&path), vec![0, 1, 2]);

        let cycle = parse_graph::<i64>("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n".as_bytes()).unwrap();
        assert_eq!(bridges(&cycle), Vec::<EdgeId>::new());

        // Two triangles joined by one edge: only the joiner is a bridge.
        let two = parse_graph::<i64>(
            "6 7\n0 1 1\n1 2 1\n2 0 1\n3 4 1\n4 5 1\n5 3 1\n2 3 1\n".as_bytes(),
        )
        .unwrap();
        assert_eq!(bridges(&two), vec![6]);

        let parallel = parse_graph::<i64>("2 2\n0 1 1\n0 1 2\n".as_bytes()).unwrap();
        assert_eq!(bridges(&parallel), Vec::<EdgeId>::new());

        let lone = parse_graph::<i64>("2 1\n0 1 1\n".as_bytes()).unwrap();
        assert_eq!(bridges(&lone), vec![0]);
    }

    #[test]
    fn vital_edge_of_four_cycle() {
        let (g, mst, ti) = setup("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n", 0);
        let rt = scan_replacements(&g, &mst, &ti, &ScanOptions::default()).table;
        let v = most_vital_edge(&g, &rt);
        assert_eq!(v, VitalEdgeReport { defined: true, edge: Some(0), delta: Some(3), bridge_count: 0 });
    }

    #[test]
    fn vital_edge_undefined_with_bridges() {
        let (g, mst, ti) = setup("3 2\n0 1 1\n1 2 2\n", 0);
        let rt = scan_replacements(&g, &mst, &ti, &ScanOptions::default()).table;
        let v = most_vital_edge(&g, &rt);
        assert_eq!(v, VitalEdgeReport { defined: false, edge: None, delta: None, bridge_count: 2 });
    }

    #[test]
    fn vital_edge_tie_takes_smaller_key() {
        let (g, mst, ti) = setup("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 5\n", 0);
        let rt = scan_replacements(&g, &mst, &ti, &ScanOptions::default()).table;
        let v = most_vital_edge(&g, &rt);
        assert_eq!(v.edge, Some(0));
        assert_eq!(v.delta, Some(4));
    }

    #[test]
    fn vital_edge_single_vertex_undefined() {
        let (g, mst, ti) = setup("1 0\n", 0);
        let rt = scan_replacements(&g, &mst, &ti, &ScanOptions::default()).table;
        let v = most_vital_edge(&g, &rt);
        assert_eq!(v, VitalEdgeReport { defined: false, edge: None, delta: None, bridge_count: 0 });
    }

    #[test]
    fn trace_lines_render() {
        let (g, mst, ti) = setup("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n", 0);
        let out = scan_replacements(
            &g,
            &mst,
            &ti,
            &ScanOptions { record_trace: true, ..Default::default() },
        );
        let trace = out.trace.unwrap();
        assert_eq!(trace.len(), 2);
        let lines: Vec<String> = trace.iter().map(|c| c.to_string()).collect();
        // Edge {0,3}: 0 is an ancestor of 3, so the first call skips and
        // the second walks the whole path assigning everything.
        assert_eq!(lines[0], "e=3 plan=SKIP assigned=[]");
        assert_eq!(lines[1], "e=3 plan=ANC assigned=[2,1,0]");
    }
}
