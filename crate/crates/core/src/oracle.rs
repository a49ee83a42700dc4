
use crate::graph::{sort_edges, EdgeId, Graph, VertexId};
use crate::kruskal::{BaselineDsu, MstResult};
use crate::weight::Weight;

/// Brute-force answers for everything the fast path computes. Built from
/// the cut definition directly, sharing nothing with the scan machinery,
/// so agreement between the two is meaningful. Quadratic and meant for
/// validation sizes only.
pub struct OracleResult<W> {
    /// Per tree edge in canonical order: minimum-key crossing non-tree
    /// edge and its weight, or None for a bridge.
    pub replacements: Vec<(EdgeId, Option<(EdgeId, W)>)>,
    /// Most vital tree edge and its weight increase; None when any tree
    /// edge is a bridge (or there are no tree edges).
    pub vital: Option<(EdgeId, W)>,
}

fn tree_adjacency<W: Weight>(g: &Graph<W>, mst: &MstResult<W>) -> Vec<Vec<(VertexId, EdgeId)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for &eid in &mst.tree_edges {
        let e = g.edge(eid);
        adj[e.u].push((e.v, eid));
        adj[e.v].push((e.u, eid));
    }
    adj
}

/// For every tree edge: delete it, two-color the tree halves, and take the
/// first non-tree edge in ascending EdgeKey order that crosses.
pub fn oracle_replacements<W: Weight>(
    g: &Graph<W>,
    mst: &MstResult<W>,
) -> Vec<(EdgeId, Option<(EdgeId, W)>)> {
    let adj = tree_adjacency(g, mst);
    let mut side = vec![false; g.n()];
    let mut out = Vec::with_capacity(mst.tree_edges.len());

    for &te in &mst.tree_edges {
        let cut = g.edge(te);
        side.iter_mut().for_each(|s| *s = false);
        side[cut.u] = true;
        let mut stack = vec![cut.u];
        while let Some(v) = stack.pop() {
            for &(to, eid) in &adj[v] {
                if eid != te && !side[to] {
                    side[to] = true;
                    stack.push(to);
                }
            }
        }

        let best = mst.nontree_sorted.iter().copied().find(|&ne| {
            let e = g.edge(ne);
            side[e.u] != side[e.v]
        });
        out.push((te, best.map(|ne| (ne, g.edge(ne).w))));
    }
    out
}

/// Weight of the minimum spanning tree of `g` without edge `skip`, or None
/// if that edge was holding the graph together. `order` is the ascending
/// key order of all edges, computed once by the caller.
fn mst_weight_without<W: Weight>(g: &Graph<W>, order: &[EdgeId], skip: EdgeId) -> Option<W> {
    let mut dsu = BaselineDsu::new(g.n());
    let mut total = W::zero();
    let mut picked = 0;
    for &eid in order {
        if eid == skip {
            continue;
        }
        let e = g.edge(eid);
        if dsu.union(e.u, e.v) {
            total = total + e.w;
            picked += 1;
            if picked == g.n() - 1 {
                return Some(total);
            }
        }
    }
    if g.n() <= 1 {
        Some(total)
    } else {
        None
    }
}

/// Recomputes the whole spanning tree once per deleted tree edge and takes
/// the argmax weight increase. Ties go to the earlier (smaller EdgeKey)
/// tree edge. None as soon as one deletion disconnects the graph.
pub fn oracle_vital<W: Weight>(g: &Graph<W>, mst: &MstResult<W>) -> Option<(EdgeId, W)> {
    let order = sort_edges(g);
    let mut best: Option<(EdgeId, W)> = None;
    for &te in &mst.tree_edges {
        let new_total = mst_weight_without(g, &order, te)?;
        let delta = new_total
            .checked_sub(&mst.total_weight)
            .expect("weight delta overflows the weight type");
        match best {
            Some((_, d)) if delta <= d => {}
            _ => best = Some((te, delta)),
        }
    }
    best
}

pub fn oracle_analyze<W: Weight>(g: &Graph<W>, mst: &MstResult<W>) -> OracleResult<W> {
    OracleResult {
        replacements: oracle_replacements(g, mst),
        vital: oracle_vital(g, mst),
    }
}

/// Reference semantics for `StaticUnion::find`: climb parents until the
/// first unlinked vertex. The caller maintains `linked` itself; this
/// function knows nothing about any engine.
pub fn oracle_find(parent: &[VertexId], linked: &[bool], v: VertexId) -> VertexId {
    let mut cur = v;
    while linked[cur] {
        cur = parent[cur];
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::kruskal::kruskal;

    fn setup(s: &str) -> (Graph<i64>, MstResult<i64>) {
        let g = parse_graph::<i64>(s.as_bytes()).unwrap();
        let mst = kruskal(&g).unwrap();
        (g, mst)
    }

    #[test]
    fn four_cycle() {
        let (g, mst) = setup("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n");
        let rep = oracle_replacements(&g, &mst);
        assert_eq!(rep, vec![(0, Some((3, 4))), (1, Some((3, 4))), (2, Some((3, 4)))]);
        assert_eq!(oracle_vital(&g, &mst), Some((0, 3)));
    }

    #[test]
    fn pure_tree_has_no_answers() {
        let (g, mst) = setup("3 2\n0 1 1\n1 2 2\n");
        let rep = oracle_replacements(&g, &mst);
        assert_eq!(rep, vec![(0, None), (1, None)]);
        assert_eq!(oracle_vital(&g, &mst), None);
    }

    #[test]
    fn parallel_pair() {
        let (g, mst) = setup("2 2\n0 1 1\n0 1 7\n");
        assert_eq!(oracle_replacements(&g, &mst), vec![(0, Some((1, 7)))]);
        assert_eq!(oracle_vital(&g, &mst), Some((0, 6)));
    }

    #[test]
    fn vital_tie_goes_to_smaller_key() {
        let (g, mst) = setup("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 5\n");
        assert_eq!(oracle_vital(&g, &mst), Some((0, 4)));
    }

    #[test]
    fn single_vertex() {
        let (g, mst) = setup("1 0\n");
        assert!(oracle_replacements(&g, &mst).is_empty());
        assert_eq!(oracle_vital(&g, &mst), None);
    }

    #[test]
    fn find_walks_linked_prefix() {
        // Chain 0 -> 1 -> 2 -> 3 (parent points up).
        let parent = vec![1, 2, 3, 3];
        let mut linked = vec![false; 4];
        assert_eq!(oracle_find(&parent, &linked, 0), 0);
        linked[0] = true;
        linked[1] = true;
        assert_eq!(oracle_find(&parent, &linked, 0), 2);
        linked[2] = true;
        assert_eq!(oracle_find(&parent, &linked, 0), 3);
        assert_eq!(oracle_find(&parent, &linked, 3), 3);
    }
}
