use std::sync::OnceLock;

use crate::graph::VertexId;
use crate::tree::TreeIndex;

/// Selects the structure behind `StaticUnion`. Both satisfy the same
/// contract; `Reference` is the small obviously-correct one, `GabowTarjan`
/// has amortized constant-time operations on the scan workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsuEngine {
    Reference,
    GabowTarjan,
}

/// Operation counters. `loop_iterations` is bumped by the cycle-walk loop
/// that drives find/link, so the counts can be checked against the
/// per-operation bounds the scan is supposed to obey.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpStats {
    pub finds: u64,
    pub links: u64,
    pub makesets: u64,
    pub loop_iterations: u64,
}

/// Disjoint sets over the vertices of a fixed rooted tree.
///
/// Each set is a connected piece of the tree and is named by its shallowest
/// vertex, the unique one not yet linked. `find(v)` returns that label:
/// the nearest unlinked ancestor-or-self of `v`. `link(v)` requires that
/// `v` is itself a label and merges its set into the parent's set. The root
/// is never linked, so every find terminates.
pub struct StaticUnion<'t> {
    ti: &'t TreeIndex,
    stats: OpStats,
    engine: EngineImpl,
}

enum EngineImpl {
    Reference(RefEngine),
    GabowTarjan(GtEngine),
}

impl<'t> StaticUnion<'t> {
    pub fn new(ti: &'t TreeIndex, engine: DsuEngine) -> Self {
        let engine = match engine {
            DsuEngine::Reference => EngineImpl::Reference(RefEngine::new(ti)),
            DsuEngine::GabowTarjan => EngineImpl::GabowTarjan(GtEngine::new(ti)),
        };
        StaticUnion { ti, stats: OpStats::default(), engine }
    }

    pub fn engine(&self) -> DsuEngine {
        match self.engine {
            EngineImpl::Reference(_) => DsuEngine::Reference,
            EngineImpl::GabowTarjan(_) => DsuEngine::GabowTarjan,
        }
    }

    pub fn makeset(&mut self, v: VertexId) {
        match &mut self.engine {
            EngineImpl::Reference(e) => {
                assert!(e.cells[v].jump & MADE == 0, "makeset({v}) called twice");
                e.cells[v].jump |= MADE;
            }
            EngineImpl::GabowTarjan(e) => {
                assert!(e.cells[v].packed & MADE == 0, "makeset({v}) called twice");
                e.cells[v].packed |= MADE;
            }
        }
        self.stats.makesets += 1;
    }

    /// Nearest unlinked ancestor-or-self of `v`.
    pub fn find(&mut self, v: VertexId) -> VertexId {
        self.stats.finds += 1;
        match &mut self.engine {
            EngineImpl::Reference(e) => e.find(v),
            EngineImpl::GabowTarjan(e) => e.find(v),
        }
    }

    /// Both traversal labels of `v`, from the same cell the engine reads
    /// first on `find(v)`, so a label check and the find it guards share
    /// one cache line.
    #[inline]
    pub fn window(&self, v: VertexId) -> (u32, u32) {
        match &self.engine {
            EngineImpl::Reference(e) => (e.cells[v].enter, e.cells[v].exit),
            EngineImpl::GabowTarjan(e) => (e.cells[v].enter, e.cells[v].exit),
        }
    }

    /// Merges the set labeled `v` into the parent's set. `v` must currently
    /// be a label (equivalently: not yet linked) and must not be the root.
    pub fn link(&mut self, v: VertexId) {
        assert!(v != self.ti.root, "the root is never linked");
        match &mut self.engine {
            EngineImpl::Reference(e) => {
                assert!(e.cells[v].jump & MADE != 0, "link({v}) before makeset");
                assert!(e.cells[v].jump & LINKED == 0, "link({v}): not a set label");
                e.cells[v].jump = self.ti.parent[v] as u32 | LINKED | MADE;
            }
            EngineImpl::GabowTarjan(e) => {
                let pk = e.cells[v].packed;
                assert!(pk & MADE != 0, "link({v}) before makeset");
                let base = ((pk & !MADE) >> 4) as usize;
                let bit = 1u16 << (pk & 15);
                assert!(e.arena[base] & bit == 0, "link({v}): not a set label");
                e.arena[base] |= bit;
            }
        }
        self.stats.links += 1;
    }

    pub fn stats(&self) -> OpStats {
        self.stats
    }

    /// Bumped once per iteration of the caller's walk loop.
    pub fn record_loop_iteration(&mut self) {
        self.stats.loop_iterations += 1;
    }

    /// Engine-internal work units: pointer hops for `Reference`, fragment
    /// queries for `GabowTarjan`. Used to measure asymptotic growth
    /// without a wall clock.
    pub fn elementary_steps(&self) -> u64 {
        match &self.engine {
            EngineImpl::Reference(e) => e.steps,
            EngineImpl::GabowTarjan(e) => e.steps,
        }
    }

    /// Warms the cache line holding `v`'s cell: its window labels and the
    /// pointer `find(v)` reads first. A pure hint with no semantic effect;
    /// callers that know their future reads can issue it a few edges ahead.
    #[inline]
    pub fn prefetch_entry(&self, v: VertexId) {
        match &self.engine {
            EngineImpl::Reference(e) => prefetch_line(&e.cells[v]),
            EngineImpl::GabowTarjan(e) => prefetch_line(&e.cells[v]),
        }
    }

    /// Follows `v`'s entry pointer (cheap once `prefetch_entry` has
    /// landed) and warms what the first probe of `find(v)` dereferences.
    /// Also purely a hint.
    #[inline]
    pub fn prefetch_record(&self, v: VertexId) {
        match &self.engine {
            EngineImpl::Reference(e) => {
                let w = (e.cells[v].jump & JUMP_MASK) as usize;
                prefetch_line(&e.cells[w]);
            }
            EngineImpl::GabowTarjan(e) => {
                let vp = e.cells[v].packed & !MADE;
                let base = (vp >> 4) as usize;
                let p = (vp & 15) as usize;
                prefetch_line(&e.arena[base]);
                prefetch_line(&e.arena[base + FRAG_HEADER + 3 * p]);
            }
        }
    }
}

/// Asks the kernel to back a large allocation with huge pages where it
/// can, shrinking translation pressure on the engines' randomly-probed
/// arrays. Purely advisory; errors are ignored. Must run before the pages
/// are first touched to take effect at fault time, so callers reserve
/// capacity, advise, then fill.
#[cfg(target_os = "linux")]
fn advise_huge<T>(ptr: *const T, bytes: usize) {
    // Below a few huge pages the advice buys nothing.
    if bytes < (1 << 22) {
        return;
    }
    let page = 4096usize;
    let addr = ptr as usize;
    let aligned = (addr + page - 1) & !(page - 1);
    let end = addr + bytes;
    if end > aligned {
        unsafe {
            libc::madvise(
                aligned as *mut libc::c_void,
                end - aligned,
                libc::MADV_HUGEPAGE,
            );
        }
    }
}

#[cfg(not(target_os = "linux"))]
fn advise_huge<T>(_ptr: *const T, _bytes: usize) {}

/// Issues a data prefetch for the line holding `r`. No-op off x86_64.
#[inline(always)]
pub(crate) fn prefetch_line<T>(r: &T) {
    #[cfg(target_arch = "x86_64")]
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch(r as *const T as *const i8, _MM_HINT_T0);
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        let _ = r;
    }
}

/// Discipline flag shared by both engines' per-vertex words: set by
/// makeset, required by find/link. Living in the word those operations
/// already read, it costs no extra memory traffic.
const MADE: u32 = 1 << 30;

/// Jump pointers with interleaved path compression. `jump[v]` is only
/// meaningful once `v` is linked and then points at some ancestor on the
/// way to the label.
/// Per-vertex record: both traversal labels next to the jump word, so a
/// window check and the find that follows read one cache line.
#[derive(Clone, Copy)]
struct RefCell {
    enter: u32,
    exit: u32,
    /// Parent pointer in the low 30 bits plus the LINKED and MADE flags.
    /// Unlinked vertices point at themselves with LINKED clear.
    jump: u32,
}

struct RefEngine {
    cells: Vec<RefCell>,
    steps: u64,
}

/// Top bit of a jump word: set once the vertex has been linked away.
const LINKED: u32 = 1 << 31;
const JUMP_MASK: u32 = !(LINKED | MADE);

impl RefEngine {
    fn new(ti: &TreeIndex) -> Self {
        let n = ti.n();
        assert!(n < MADE as usize, "vertex count exceeds jump word width");
        let mut cells = Vec::with_capacity(n);
        advise_huge(cells.as_ptr(), n * std::mem::size_of::<RefCell>());
        cells.extend((0..n).map(|v| RefCell {
            enter: ti.in_label[v] as u32,
            exit: ti.out_label[v] as u32,
            jump: v as u32,
        }));
        RefEngine { cells, steps: 0 }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        assert!(self.cells[v].jump & MADE != 0, "find({v}) before makeset");
        let mut root = v;
        while self.cells[root].jump & LINKED != 0 {
            root = (self.cells[root].jump & JUMP_MASK) as usize;
            self.steps += 1;
        }
        let mut cur = v;
        while self.cells[cur].jump & LINKED != 0 {
            let next = (self.cells[cur].jump & JUMP_MASK) as usize;
            self.cells[cur].jump = root as u32 | LINKED | MADE;
            cur = next;
        }
        root
    }
}

/// Microset size cap. Half the bit width of a machine word, taking the
/// 32-bit word so the answer table is 2^16 entries and costs 64 KiB once
/// per process.
const MICRO_CAP: usize = 16;

static MSB16: OnceLock<Box<[u8]>> = OnceLock::new();

/// answer[word] = index of the highest set bit. The climb consults it with
/// word = (ancestors-of-position | position-bit) & !marks, so the lookup
/// answers "deepest unlinked ancestor-or-self inside this microset".
fn answer_table() -> &'static [u8] {
    MSB16.get_or_init(|| {
        let mut t = vec![0u8; 1 << MICRO_CAP];
        for (w, slot) in t.iter_mut().enumerate().skip(1) {
            *slot = (15 - (w as u16).leading_zeros()) as u8;
        }
        t.into_boxed_slice()
    })
}

/// Microsets over the tree: connected fragments of at most MICRO_CAP
/// vertices, packed greedily bottom-up. Within a fragment, members are
/// numbered in preorder and each carries the bit mask of its in-fragment
/// strict ancestors, so one table lookup finds the deepest unlinked
/// ancestor inside the fragment.
///
/// Across fragments, each record's skip slot is the macro structure: a
/// union-find over fragment roots realized as compressed skip pointers.
/// Invariant: the skip vertex is a strict ancestor of the fragment root
/// and every vertex from the fragment root up to (excluding) it is
/// linked. Pointers only advance along paths a failed query has just
/// proven fully linked, which is what keeps skipping sound even when a
/// fragment root is linked while vertices on a sibling entry path are not.
///
/// The whole per-fragment state lives in one contiguous u16 record so a
/// find touches a single cache-resident span instead of parallel arrays:
///
/// ```text
/// arena[base]              marks: bit p set once local member p is linked
/// arena[base+1..=base+2]   skip vertex id, low/high halves
/// arena[base+3+3p]         ancestor mask of local member p
/// arena[base+3+3p+1..+2]   global vertex id of member p, low/high halves
/// ```
///
/// `cells[v].packed` holds v's record base and local position as
/// (base << 4) | p plus the MADE flag, beside the traversal labels.
struct GtEngine {
    cells: Vec<GtCell>,
    arena: Vec<u16>,
    steps: u64,
    /// Scratch for find: record bases whose skip slots get compressed.
    trail: Vec<u32>,
}

/// Per-vertex record, window labels co-located with the packed pointer.
#[derive(Clone, Copy)]
struct GtCell {
    enter: u32,
    exit: u32,
    packed: u32,
}

/// u16 slots per fragment record before the per-member triples.
const FRAG_HEADER: usize = 3;

impl GtEngine {
    fn new(ti: &TreeIndex) -> Self {
        let n = ti.n();
        let pre = &ti.preorder;

        // Bottom-up greedy packing in reverse preorder: every vertex starts
        // as its own open fragment; a child fragment is absorbed into its
        // parent's while the combined size fits, otherwise it is final. By
        // the time a vertex comes up, its whole subtree has been decided,
        // so open_size[c] is the final size of c's fragment.
        let mut open_size = vec![1u8; n];
        let mut absorbed = vec![false; n];
        let mut frag_count = 1usize; // the root's fragment
        for &c in pre[1..].iter().rev() {
            let c = c as usize;
            let p = ti.parent[c];
            if (open_size[p] + open_size[c]) as usize <= MICRO_CAP {
                open_size[p] += open_size[c];
                absorbed[c] = true;
            } else {
                frag_count += 1;
            }
        }

        // Emit records in forward preorder. A non-absorbed vertex opens its
        // fragment's record (size known, so the whole span is reserved); an
        // absorbed vertex joins its parent's record, found through the
        // parent's cell. Within a fragment, arrival order is preorder, so
        // ancestors come first and each mask extends the parent's by one
        // bit. The marks slot doubles as the fill cursor until the final
        // sweep resets it.
        let mut cells: Vec<GtCell> = Vec::with_capacity(n);
        advise_huge(cells.as_ptr(), n * std::mem::size_of::<GtCell>());
        cells.extend((0..n).map(|v| GtCell {
            enter: ti.in_label[v] as u32,
            exit: ti.out_label[v] as u32,
            packed: 0,
        }));
        let arena_len = FRAG_HEADER * frag_count + 3 * n;
        assert!(arena_len < (1 << 26), "arena exceeds packed base width");
        let mut arena = Vec::with_capacity(arena_len);
        advise_huge(arena.as_ptr(), arena_len * 2);
        arena.resize(arena_len, 0u16);
        let mut next_base = 0usize;
        for &x in pre {
            let x = x as usize;
            if !absorbed[x] {
                let base = next_base;
                next_base += FRAG_HEADER + 3 * open_size[x] as usize;
                let skip = ti.parent[x];
                arena[base] = 1;
                arena[base + 1] = skip as u16;
                arena[base + 2] = (skip >> 16) as u16;
                cells[x].packed = (base as u32) << 4;
                arena[base + FRAG_HEADER + 1] = x as u16;
                arena[base + FRAG_HEADER + 2] = (x >> 16) as u16;
            } else {
                let pv = cells[ti.parent[x]].packed;
                let base = (pv >> 4) as usize;
                let lp = (pv & 15) as usize;
                let pos = arena[base] as usize;
                arena[base] = (pos + 1) as u16;
                cells[x].packed = ((base as u32) << 4) | pos as u32;
                let slot = base + FRAG_HEADER + 3 * pos;
                arena[slot] = arena[base + FRAG_HEADER + 3 * lp] | (1u16 << lp);
                arena[slot + 1] = x as u16;
                arena[slot + 2] = (x >> 16) as u16;
            }
        }
        debug_assert_eq!(next_base, arena.len());

        // Fill cursors become the (empty) mark words.
        let mut b = 0usize;
        while b < arena.len() {
            let len = arena[b] as usize;
            arena[b] = 0;
            b += FRAG_HEADER + 3 * len;
        }

        GtEngine { cells, arena, steps: 0, trail: Vec::new() }
    }

    /// Reads the two-slot vertex id starting at arena index `at`.
    #[inline]
    fn vertex_at(&self, at: usize) -> VertexId {
        self.arena[at] as usize | (self.arena[at + 1] as usize) << 16
    }

    /// Deepest unlinked ancestor-or-self of the member addressed by packed
    /// pointer `vp`, by one answer-table lookup inside its record. Returns
    /// the winning member's global id, or None when the whole in-fragment
    /// ancestor path is linked.
    #[inline]
    fn query(&mut self, vp: u32) -> Option<VertexId> {
        self.steps += 1;
        let base = (vp >> 4) as usize;
        let p = vp & 15;
        let word =
            (self.arena[base + FRAG_HEADER + 3 * p as usize] | (1u16 << p)) & !self.arena[base];
        if word == 0 {
            None
        } else {
            let local = answer_table()[word as usize] as usize;
            Some(self.vertex_at(base + FRAG_HEADER + 3 * local + 1))
        }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        let pk = self.cells[v].packed;
        assert!(pk & MADE != 0, "find({v}) before makeset");
        let vp = pk & !MADE;
        if let Some(hit) = self.query(vp) {
            return hit;
        }

        // Everything from v through its fragment root is linked. Climb by
        // skip pointers; each miss proves another root-to-skip segment is
        // fully linked, so the trail can be compressed to the answer.
        let mut trail = std::mem::take(&mut self.trail);
        trail.clear();
        let mut base = (vp >> 4) as usize;
        let answer = loop {
            trail.push(base as u32);
            let w = self.vertex_at(base + 1);
            let wp = self.cells[w].packed & !MADE;
            match self.query(wp) {
                Some(hit) => break hit,
                None => base = (wp >> 4) as usize,
            }
        };
        for &b in &trail {
            self.arena[b as usize + 1] = answer as u16;
            self.arena[b as usize + 2] = (answer >> 16) as u16;
        }
        self.trail = trail;
        answer
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::kruskal::kruskal;
    use crate::tree::build_tree_index;

    /// Path 0-1-2-...-(n-1) rooted at the far end, so parent[v] = v + 1.
    fn chain(n: usize) -> TreeIndex {
        let edges: Vec<(usize, usize, i64)> = (1..n).map(|v| (v - 1, v, 1)).collect();
        let g = Graph::new(n, edges);
        let mst = kruskal(&g).unwrap();
        build_tree_index(&g, &mst, n - 1)
    }

    fn make_all(su: &mut StaticUnion<'_>) {
        for v in 0..su.ti.n() {
            su.makeset(v);
        }
    }

    #[test]
    fn chain_link_walk() {
        for engine in [DsuEngine::Reference, DsuEngine::GabowTarjan] {
            let ti = chain(3);
            let mut su = StaticUnion::new(&ti, engine);
            make_all(&mut su);
            assert_eq!(su.find(0), 0);
            su.link(0);
            assert_eq!(su.find(0), 1);
            su.link(1);
            assert_eq!(su.find(0), 2);
            assert_eq!(su.find(1), 2);
            assert_eq!(su.find(2), 2);
        }
    }

    #[test]
    fn full_contraction_points_at_root() {
        for engine in [DsuEngine::Reference, DsuEngine::GabowTarjan] {
            let ti = chain(40);
            let mut su = StaticUnion::new(&ti, engine);
            make_all(&mut su);
            for v in 0..39 {
                assert_eq!(su.find(v), v);
                su.link(v);
            }
            for v in 0..40 {
                assert_eq!(su.find(v), 39);
            }
            assert_eq!(su.stats().links, 39);
            assert_eq!(su.stats().makesets, 40);
        }
    }

    #[test]
    fn out_of_order_links() {
        for engine in [DsuEngine::Reference, DsuEngine::GabowTarjan] {
            let ti = chain(6);
            let mut su = StaticUnion::new(&ti, engine);
            make_all(&mut su);
            // Link an interior vertex first: finds below it jump over.
            su.link(3);
            assert_eq!(su.find(3), 4);
            assert_eq!(su.find(2), 2);
            su.link(2);
            assert_eq!(su.find(2), 4);
            su.link(4);
            assert_eq!(su.find(2), 5);
            assert_eq!(su.find(0), 0);
        }
    }

    #[test]
    #[should_panic(expected = "makeset(2) called twice")]
    fn double_makeset_panics() {
        let ti = chain(3);
        let mut su = StaticUnion::new(&ti, DsuEngine::Reference);
        su.makeset(2);
        su.makeset(2);
    }

    #[test]
    #[should_panic(expected = "the root is never linked")]
    fn linking_root_panics() {
        let ti = chain(3);
        let mut su = StaticUnion::new(&ti, DsuEngine::GabowTarjan);
        make_all(&mut su);
        su.link(2);
    }

    #[test]
    #[should_panic(expected = "not a set label")]
    fn relinking_panics() {
        let ti = chain(4);
        let mut su = StaticUnion::new(&ti, DsuEngine::GabowTarjan);
        make_all(&mut su);
        su.link(1);
        su.link(1);
    }

    #[test]
    fn long_chain_crosses_fragments() {
        for engine in [DsuEngine::Reference, DsuEngine::GabowTarjan] {
            let ti = chain(100);
            let mut su = StaticUnion::new(&ti, engine);
            make_all(&mut su);
            for v in 0..70 {
                su.link(v);
            }
            assert_eq!(su.find(0), 70);
            assert_eq!(su.find(35), 70);
            su.link(70);
            assert_eq!(su.find(12), 71);
        }
    }

    #[test]
    fn star_tree_all_leaves() {
        // Root in the middle; every leaf is its own fragment neighborhood.
        let n = 50;
        let edges: Vec<(usize, usize, i64)> = (1..n).map(|v| (0, v, 1)).collect();
        let g = Graph::new(n, edges);
        let mst = kruskal(&g).unwrap();
        let ti = build_tree_index(&g, &mst, 0);
        for engine in [DsuEngine::Reference, DsuEngine::GabowTarjan] {
            let mut su = StaticUnion::new(&ti, engine);
            make_all(&mut su);
            for v in 1..n {
                assert_eq!(su.find(v), v);
                su.link(v);
                assert_eq!(su.find(v), 0);
            }
        }
    }

    #[test]
    fn steps_stay_linear_on_sequential_contraction() {
        let n = 4096;
        let ti = chain(n);
        let mut su = StaticUnion::new(&ti, DsuEngine::GabowTarjan);
        make_all(&mut su);
        let mut finds = 0u64;
        for v in 0..n - 1 {
            su.find(v);
            su.link(v);
            su.find(0);
            finds += 2;
        }
        let steps = su.elementary_steps();
        assert!(
            steps <= 8 * (n as u64 + finds),
            "steps {steps} not linear in n + finds = {}",
            n as u64 + finds
        );
    }
}
