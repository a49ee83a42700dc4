
use crate::error::Error;
use crate::graph::{sort_edges, EdgeId, Graph, VertexId};
use crate::weight::Weight;

/// Union-find with union by rank and iterative path compression. Used only
/// while building the tree; the scan afterwards uses the static-tree
/// structure, which has a different contract.
pub struct BaselineDsu {
    parent: Vec<VertexId>,
    rank: Vec<u8>,
}

impl BaselineDsu {
    pub fn new(n: usize) -> Self {
        BaselineDsu { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, v: VertexId) -> VertexId {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the two sets; false if already joined.
    pub fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
        true
    }
}

/// Kruskal output. `tree_edges` and `nontree_sorted` both preserve ascending
/// `EdgeKey` order, so the scan can consume non-tree edges without resorting.
/// `nontree_pairs` mirrors `nontree_sorted` with the endpoints of each edge;
/// emitting them here, where the sorted pass reads every edge record anyway,
/// spares the scan a random gather over the edge array.
pub struct MstResult<W> {
    pub tree_edges: Vec<EdgeId>,
    pub nontree_sorted: Vec<EdgeId>,
    pub nontree_pairs: Vec<(u32, u32)>,
    pub total_weight: W,
    is_tree: Vec<bool>,
}

impl<W> MstResult<W> {
    pub fn is_tree_edge(&self, eid: EdgeId) -> bool {
        self.is_tree[eid]
    }
}

/// Kruskal over the EdgeKey order. The tree is unique because the key order
/// is strict. Requires n >= 1; errors if the graph is disconnected.
pub fn kruskal<W: Weight>(g: &Graph<W>) -> Result<MstResult<W>, Error> {
    assert!(g.n() >= 1, "kruskal needs at least one vertex");
    assert!(g.n() <= u32::MAX as usize, "vertex count exceeds endpoint pair width");
    let order = sort_edges(g);
    let mut dsu = BaselineDsu::new(g.n());
    let mut tree_edges = Vec::with_capacity(g.n() - 1);
    let nontree_cap = g.m().saturating_sub(g.n() - 1);
    let mut nontree_sorted = Vec::with_capacity(nontree_cap);
    let mut nontree_pairs = Vec::with_capacity(nontree_cap);
    let mut is_tree = vec![false; g.m()];
    let mut total = W::zero();

    let mut pos = 0;
    while pos < order.len() && tree_edges.len() < g.n() - 1 {
        let eid = order[pos];
        let e = g.edge(eid);
        if dsu.union(e.u, e.v) {
            tree_edges.push(eid);
            is_tree[eid] = true;
            total = total.checked_add(&e.w).ok_or(Error::WeightSumOverflow)?;
        } else {
            nontree_sorted.push(eid);
            nontree_pairs.push((e.u as u32, e.v as u32));
        }
        pos += 1;
    }
    // The tree is complete; everything left closes a cycle.
    for &eid in &order[pos..] {
        let e = g.edge(eid);
        nontree_sorted.push(eid);
        nontree_pairs.push((e.u as u32, e.v as u32));
    }

    if tree_edges.len() != g.n() - 1 {
        return Err(Error::NotConnected);
    }
    Ok(MstResult { tree_edges, nontree_sorted, nontree_pairs, total_weight: total, is_tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn graph(s: &str) -> Graph<i64> {
        parse_graph(s.as_bytes()).unwrap()
    }

    #[test]
    fn four_cycle_tree() {
        let g = graph("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n");
        let mst = kruskal(&g).unwrap();
        assert_eq!(mst.tree_edges, vec![0, 1, 2]);
        assert_eq!(mst.nontree_sorted, vec![3]);
        assert_eq!(mst.total_weight, 6);
        assert!(mst.is_tree_edge(0) && !mst.is_tree_edge(3));
    }

    #[test]
    fn single_vertex() {
        let g = graph("1 0\n");
        let mst = kruskal(&g).unwrap();
        assert!(mst.tree_edges.is_empty());
        assert!(mst.nontree_sorted.is_empty());
        assert_eq!(mst.total_weight, 0);
    }

    #[test]
    fn input_already_a_tree() {
        let g = graph("4 3\n0 1 9\n1 2 -4\n1 3 2\n");
        let mst = kruskal(&g).unwrap();
        assert_eq!(mst.tree_edges.len(), 3);
        assert!(mst.nontree_sorted.is_empty());
        assert_eq!(mst.total_weight, 7);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = graph("4 2\n0 1 1\n2 3 1\n");
        assert!(matches!(kruskal(&g), Err(Error::NotConnected)));
    }

    #[test]
    fn parallel_edges_pick_lower_key() {
        let g = graph("2 2\n0 1 7\n0 1 1\n");
        let mst = kruskal(&g).unwrap();
        assert_eq!(mst.tree_edges, vec![1]);
        assert_eq!(mst.nontree_sorted, vec![0]);
    }

    #[test]
    fn equal_weights_break_by_endpoints_then_id() {
        let g = graph("3 3\n0 1 5\n0 2 5\n1 2 5\n");
        let mst = kruskal(&g).unwrap();
        // Keys: (5,0,1,0) < (5,0,2,1) < (5,1,2,2).
        assert_eq!(mst.tree_edges, vec![0, 1]);
        assert_eq!(mst.nontree_sorted, vec![2]);
    }

    #[test]
    fn sum_overflow_reported() {
        let g: Graph<i8> = Graph::new(3, vec![(0, 1, 100i8), (1, 2, 100i8)]);
        assert!(matches!(kruskal(&g), Err(Error::WeightSumOverflow)));
    }
}
