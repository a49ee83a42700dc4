use crate::graph::{EdgeId, Graph, VertexId};
use crate::kruskal::MstResult;
use crate::weight::Weight;

/// Rooted view of the spanning tree plus traversal step labels.
///
/// The labels come from one depth-first walk over the tree in which a step
/// counter advances on every edge traversal, down or up. Stepping down into
/// a vertex records its `in_label`; stepping back up out of it records its
/// `out_label`. The root gets `in_label = 0` before the walk and
/// `out_label = final counter + 1` after it, so the root's interval strictly
/// contains every other label. All 2n labels are pairwise distinct.
pub struct TreeIndex {
    pub root: VertexId,
    /// parent[root] == root.
    pub parent: Vec<VertexId>,
    /// Edge id of {v, parent[v]}; parent_eid[root] == NO_PARENT_EDGE.
    pub parent_eid: Vec<EdgeId>,
    pub in_label: Vec<u64>,
    pub out_label: Vec<u64>,
    /// Depth from the root. Diagnostic only; the scan never reads it.
    pub depth: Vec<u32>,
    /// Vertices in first-visit (ascending in-label) order; preorder[0] is
    /// the root. Lets consumers run bottom-up or top-down passes over the
    /// tree as plain array scans.
    pub preorder: Vec<u32>,
}

pub const NO_PARENT_EDGE: EdgeId = usize::MAX;

impl TreeIndex {
    /// True iff `a` is a strict ancestor of `d`. A vertex is not its own
    /// ancestor: both comparisons are strict and in_label values are unique.
    pub fn is_ancestor(&self, a: VertexId, d: VertexId) -> bool {
        self.in_label[a] < self.in_label[d] && self.in_label[d] < self.out_label[a]
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }
}

/// Adjacency of the tree edges only, each list ascending by neighbor id.
/// Built with counting passes; the ascending order falls out of filling by
/// source vertex in increasing order.
fn tree_adjacency<W: Weight>(
    g: &Graph<W>,
    mst: &MstResult<W>,
) -> (Vec<usize>, Vec<(VertexId, EdgeId)>) {
    let n = g.n();
    let mut start = vec![0usize; n + 1];
    for &eid in &mst.tree_edges {
        let e = g.edge(eid);
        start[e.u + 1] += 1;
        start[e.v + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }

    // First group tree edges by endpoint, then emit grouped entries in
    // ascending endpoint order so each destination list ends up sorted.
    let mut by_vertex_fill = start.clone();
    let mut by_vertex = vec![0 as EdgeId; 2 * mst.tree_edges.len()];
    for &eid in &mst.tree_edges {
        let e = g.edge(eid);
        by_vertex[by_vertex_fill[e.u]] = eid;
        by_vertex_fill[e.u] += 1;
        by_vertex[by_vertex_fill[e.v]] = eid;
        by_vertex_fill[e.v] += 1;
    }

    let mut fill = start.clone();
    let mut adj = vec![(0usize, 0usize); 2 * mst.tree_edges.len()];
    for x in 0..n {
        for &eid in &by_vertex[start[x]..start[x + 1]] {
            let e = g.edge(eid);
            let other = if e.u == x { e.v } else { e.u };
            adj[fill[other]] = (x, eid);
            fill[other] += 1;
        }
    }
    (start, adj)
}

/// Roots the spanning tree and assigns the step labels. The walk is
/// iterative (a million-vertex path must not touch the call stack) and
/// visits children in ascending vertex id, which pins every label.
pub fn build_tree_index<W: Weight>(
    g: &Graph<W>,
    mst: &MstResult<W>,
    root: VertexId,
) -> TreeIndex {
    let n = g.n();
    assert!(root < n, "root {root} out of range for n = {n}");
    // Labels count to 2n-1, and the scan packs them into 32-bit windows.
    assert!(n < 1 << 31, "vertex count exceeds traversal label width");
    assert_eq!(mst.tree_edges.len(), n - 1, "spanning tree must cover the graph");

    let (start, adj) = tree_adjacency(g, mst);

    let mut parent = vec![usize::MAX; n];
    let mut parent_eid = vec![NO_PARENT_EDGE; n];
    let mut in_label = vec![0u64; n];
    let mut out_label = vec![0u64; n];
    let mut depth = vec![0u32; n];

    parent[root] = root;
    in_label[root] = 0;
    let mut preorder = Vec::with_capacity(n);
    preorder.push(root as u32);
    let mut counter = 0u64;
    // (vertex, cursor into its adjacency slice)
    let mut stack: Vec<(VertexId, usize)> = Vec::with_capacity(64);
    stack.push((root, start[root]));

    while let Some(frame) = stack.last_mut() {
        let v = frame.0;
        if frame.1 < start[v + 1] {
            let (to, eid) = adj[frame.1];
            frame.1 += 1;
            // The only visited neighbor in a tree is the parent.
            if to == parent[v] {
                continue;
            }
            counter += 1;
            in_label[to] = counter;
            parent[to] = v;
            parent_eid[to] = eid;
            depth[to] = depth[v] + 1;
            preorder.push(to as u32);
            stack.push((to, start[to]));
        } else {
            stack.pop();
            if v != root {
                counter += 1;
                out_label[v] = counter;
            }
        }
    }
    out_label[root] = counter + 1;

    TreeIndex { root, parent, parent_eid, in_label, out_label, depth, preorder }
}
