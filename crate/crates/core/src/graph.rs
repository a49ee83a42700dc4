use std::io::{BufRead, Write};
use std::num::IntErrorKind;

use crate::error::Error;
use crate::weight::Weight;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected weighted edge, endpoints stored canonically with `u < v`.
/// `eid` equals the edge's index in `Graph::edges`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub w: W,
    pub eid: EdgeId,
}

/// Total order on edges: weight, then canonical endpoints, then edge id.
/// Every tie anywhere in the pipeline is broken by this key and nothing else,
/// which is what makes the minimum spanning tree and all replacement answers
/// unique even with duplicate weights and parallel edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeKey<W>(pub W, pub VertexId, pub VertexId, pub EdgeId);

impl<W: Weight> Edge<W> {
    pub fn key(&self) -> EdgeKey<W> {
        EdgeKey(self.w, self.u, self.v, self.eid)
    }
}

/// Undirected multigraph on dense vertex ids `0..n`. Parallel edges are kept,
/// self loops are dropped at construction and counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph<W> {
    n: usize,
    edges: Vec<Edge<W>>,
    adj_start: Vec<usize>,
    adj: Vec<(VertexId, EdgeId)>,
    self_loops_dropped: usize,
}

impl<W: Weight> Graph<W> {
    /// Builds a graph from an edge iterator. Endpoints must already be in
    /// range; out-of-range input is a caller bug, not a data error.
    pub fn new(n: usize, raw: impl IntoIterator<Item = (VertexId, VertexId, W)>) -> Self {
        let mut edges = Vec::new();
        let mut self_loops_dropped = 0;
        for (u, v, w) in raw {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u == v {
                self_loops_dropped += 1;
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            let eid = edges.len();
            edges.push(Edge { u: a, v: b, w, eid });
        }

        let mut adj_start = vec![0usize; n + 1];
        for e in &edges {
            adj_start[e.u + 1] += 1;
            adj_start[e.v + 1] += 1;
        }
        for i in 0..n {
            adj_start[i + 1] += adj_start[i];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![(0usize, 0usize); 2 * edges.len()];
        for e in &edges {
            adj[fill[e.u]] = (e.v, e.eid);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, e.eid);
            fill[e.v] += 1;
        }

        Graph { n, edges, adj_start, adj, self_loops_dropped }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, eid: EdgeId) -> &Edge<W> {
        &self.edges[eid]
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }
}

/// Edge ids sorted ascending by `EdgeKey`. The output is a permutation of
/// `0..m` and is unique because the key order is strict.
pub fn sort_edges<W: Weight>(g: &Graph<W>) -> Vec<EdgeId> {
    let mut perm: Vec<EdgeId> = (0..g.m()).collect();
    perm.sort_unstable_by_key(|&eid| g.edge(eid).key());
    perm
}

/// True iff every vertex is reachable from vertex 0 (vacuously true for n = 0).
pub fn connectivity_check<W: Weight>(g: &Graph<W>) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(to, _) in g.neighbors(v) {
            if !seen[to] {
                seen[to] = true;
                count += 1;
                stack.push(to);
            }
        }
    }
    count == g.n()
}

fn parse_weight<W: Weight>(token: &str, line: usize) -> Result<W, Error> {
    let wide: i128 = token.parse().map_err(|e: std::num::ParseIntError| match e.kind() {
        IntErrorKind::PosOverflow | IntErrorKind::NegOverflow => {
            Error::WeightOverflow { line, token: token.to_string() }
        }
        _ => Error::BadWeight { line, token: token.to_string() },
    })?;
    num_traits::cast::<i128, W>(wide)
        .ok_or(Error::WeightOverflow { line, token: token.to_string() })
}

/// Parses the text edge-list format:
///
/// ```text
/// # comment, anywhere
/// n m
/// u v w        (m lines, 0-based ids, integer weights)
/// ```
///
/// Everything after `#` on a line is ignored; blank lines are skipped.
/// Self loops are dropped and counted on the returned graph. Parallel edges
/// are kept. Every failure names the offending 1-based line.
pub fn parse_graph<W: Weight>(input: impl BufRead) -> Result<Graph<W>, Error> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw: Vec<(VertexId, VertexId, W)> = Vec::new();
    let mut n = 0usize;
    let mut m = 0usize;
    let mut last_line = 0usize;

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let text = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut tokens = text.split_whitespace();
        let Some(first) = tokens.next() else { continue };

        if header.is_none() {
            let n_tok = first;
            let m_tok = tokens.next().ok_or_else(|| Error::BadHeader {
                line: lineno,
                detail: "expected two integers: n m".into(),
            })?;
            if let Some(extra) = tokens.next() {
                return Err(Error::BadHeader {
                    line: lineno,
                    detail: format!("unexpected token {extra:?} after n m"),
                });
            }
            n = n_tok.parse().map_err(|_| Error::BadHeader {
                line: lineno,
                detail: format!("bad vertex count {n_tok:?}"),
            })?;
            m = m_tok.parse().map_err(|_| Error::BadHeader {
                line: lineno,
                detail: format!("bad edge count {m_tok:?}"),
            })?;
            header = Some((n, m));
            raw.reserve(m.min(1 << 22));
            continue;
        }

        if raw.len() == m {
            return Err(Error::EdgeCountMismatch { line: lineno, expected: m, found: m + 1 });
        }

        let u_tok = first;
        let v_tok = tokens.next().ok_or_else(|| Error::BadEdgeLine {
            line: lineno,
            detail: "expected three tokens: u v w".into(),
        })?;
        let w_tok = tokens.next().ok_or_else(|| Error::BadEdgeLine {
            line: lineno,
            detail: "expected three tokens: u v w".into(),
        })?;
        if let Some(extra) = tokens.next() {
            return Err(Error::BadEdgeLine {
                line: lineno,
                detail: format!("unexpected token {extra:?} after u v w"),
            });
        }

        let u: usize = u_tok.parse().map_err(|_| Error::BadEdgeLine {
            line: lineno,
            detail: format!("bad vertex id {u_tok:?}"),
        })?;
        let v: usize = v_tok.parse().map_err(|_| Error::BadEdgeLine {
            line: lineno,
            detail: format!("bad vertex id {v_tok:?}"),
        })?;
        if u >= n {
            return Err(Error::VertexOutOfRange { line: lineno, vertex: u, n });
        }
        if v >= n {
            return Err(Error::VertexOutOfRange { line: lineno, vertex: v, n });
        }
        let w = parse_weight::<W>(w_tok, lineno)?;
        raw.push((u, v, w));
    }

    let Some((n, m)) = header else {
        return Err(Error::BadHeader { line: last_line.max(1), detail: "missing header".into() });
    };
    if raw.len() != m {
        return Err(Error::EdgeCountMismatch {
            line: last_line,
            expected: m,
            found: raw.len(),
        });
    }
    Ok(Graph::new(n, raw))
}

/// Canonical serialization: header then edges in id order, endpoints `u < v`.
/// `parse_graph(write_graph(g)) == g` because construction order is id order.
pub fn write_graph<W: Weight>(g: &Graph<W>, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse64(s: &str) -> Result<Graph<i64>, Error> {
        parse_graph::<i64>(s.as_bytes())
    }

    #[test]
    fn parses_four_cycle() {
        let g = parse64("4 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(g.edge(3), &Edge { u: 0, v: 3, w: 4, eid: 3 });
        assert_eq!(g.self_loops_dropped(), 0);
    }

    #[test]
    fn canonicalizes_endpoints() {
        let g = parse64("3 2\n2 0 5\n1 0 7\n").unwrap();
        assert_eq!(g.edge(0), &Edge { u: 0, v: 2, w: 5, eid: 0 });
        assert_eq!(g.edge(1), &Edge { u: 0, v: 1, w: 7, eid: 1 });
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let g = parse64("# header next\n\n2 1 # n m\n0 1 -3 # edge\n# done\n").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge(0).w, -3);
    }

    #[test]
    fn drops_self_loops_and_counts() {
        let g = parse64("2 1\n0 0 5\n").unwrap();
        assert_eq!(g.m(), 0);
        assert_eq!(g.self_loops_dropped(), 1);
    }

    #[test]
    fn keeps_parallel_edges() {
        let g = parse64("2 2\n0 1 1\n1 0 7\n").unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.edge(0).key() < g.edge(1).key());
    }

    #[test]
    fn rejects_vertex_out_of_range() {
        match parse64("2 1\n0 2 1\n") {
            Err(Error::VertexOutOfRange { line: 2, vertex: 2, n: 2 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(parse64("4\n"), Err(Error::BadHeader { line: 1, .. })));
        assert!(matches!(parse64(""), Err(Error::BadHeader { .. })));
    }

    #[test]
    fn rejects_edge_count_mismatch() {
        assert!(matches!(
            parse64("2 2\n0 1 1\n"),
            Err(Error::EdgeCountMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse64("2 1\n0 1 1\n1 0 2\n"),
            Err(Error::EdgeCountMismatch { expected: 1, found: 2, .. })
        ));
    }

    #[test]
    fn rejects_float_weight() {
        assert!(matches!(parse64("2 1\n0 1 3.5\n"), Err(Error::BadWeight { line: 2, .. })));
    }

    #[test]
    fn rejects_weight_overflow() {
        let s = "2 1\n0 1 100000000000000000000000000000000000000000\n";
        assert!(matches!(parse64(s), Err(Error::WeightOverflow { line: 2, .. })));
        // Fits i128 but not the i16 scalar.
        let r = parse_graph::<i16>("2 1\n0 1 40000\n".as_bytes());
        assert!(matches!(r, Err(Error::WeightOverflow { line: 2, .. })));
    }

    #[test]
    fn sort_orders_by_weight_then_endpoints_then_id() {
        let g = parse64("4 4\n0 1 4\n1 2 1\n2 3 3\n3 0 2\n").unwrap();
        assert_eq!(sort_edges(&g), vec![1, 3, 2, 0]);

        // Identical (w, u, v): edge id decides.
        let g = parse64("2 2\n0 1 5\n0 1 5\n").unwrap();
        assert_eq!(sort_edges(&g), vec![0, 1]);

        // Already sorted input is the identity permutation.
        let g = parse64("3 2\n0 1 1\n1 2 2\n").unwrap();
        assert_eq!(sort_edges(&g), vec![0, 1]);
    }

    #[test]
    fn connectivity_basics() {
        assert!(connectivity_check(&parse64("1 0\n").unwrap()));
        assert!(connectivity_check(&parse64("3 2\n0 1 1\n1 2 1\n").unwrap()));
        assert!(!connectivity_check(&parse64("3 1\n0 1 1\n").unwrap()));
        // Self loop contributes nothing to connectivity.
        assert!(!connectivity_check(&parse64("2 1\n1 1 1\n").unwrap()));
    }

    #[test]
    fn round_trips_through_canonical_form() {
        let g = parse64("4 3\n3 0 4\n1 2 -2\n2 0 0\n").unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let h = parse_graph::<i64>(buf.as_slice()).unwrap();
        assert_eq!(g, h);
    }
}
