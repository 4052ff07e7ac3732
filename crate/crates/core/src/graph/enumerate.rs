//! Exhaustive graph enumeration and brute-force canonical forms.
//!
//! Canonical forms minimize an encoding over all `n!` node permutations, so
//! they are only practical for small graphs (roughly `n ≤ 8`). Shape
//! enumeration with deduplication grows node by node: every graph on `n`
//! nodes is obtained from some graph on `n − 1` nodes by adding a node, so
//! extending one representative per class at `n − 1` reaches every class at
//! `n`.

use std::collections::HashSet;

use super::{Graph, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumMode {
    /// Every directed graph (self-loops included).
    AllDirected,
    /// Undirected, weakly connected graphs.
    ConnectedUndirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub mode: EnumMode,
    /// Yield one representative per isomorphism class.
    pub dedup: bool,
    /// Whether self-loops may appear; only honored in connected-undirected mode.
    pub self_loops: bool,
}

impl EnumOptions {
    pub fn new(mode: EnumMode) -> Self {
        EnumOptions {
            mode,
            dedup: true,
            self_loops: true,
        }
    }

    pub fn dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn self_loops(mut self, self_loops: bool) -> Self {
        self.self_loops = self_loops;
        self
    }

    pub(crate) fn loops_allowed(&self) -> bool {
        self.mode == EnumMode::AllDirected || self.self_loops
    }
}

impl From<EnumMode> for EnumOptions {
    fn from(mode: EnumMode) -> Self {
        EnumOptions::new(mode)
    }
}

/// Applies `perm` (old id → new id) to the graph.
pub fn permute(g: &LabeledGraph, perm: &[usize]) -> LabeledGraph {
    let n = g.node_count();
    let mut graph = Graph::new(n, g.graph.edge_symbol_count()).expect("nonempty");
    for (gamma, u, v) in g.graph.all_edges() {
        graph.add_edge(gamma, perm[u], perm[v]).expect("valid ids");
    }
    let mut labels = vec![0; n];
    for v in 0..n {
        labels[perm[v]] = g.labels[v];
    }
    LabeledGraph { graph, labels }
}

/// Adjacency bits of `g` with node `i` renamed to `perm[i]`, packed into
/// 64-bit words, symbol-major then row-major.
fn encode_shape(g: &Graph, perm: &[usize], out: &mut Vec<u64>) {
    let n = g.node_count();
    let bits = g.edge_symbol_count() * n * n;
    out.clear();
    out.resize(bits.div_ceil(64), 0);
    for (gamma, u, v) in g.all_edges() {
        let bit = gamma * n * n + perm[u] * n + perm[v];
        // Most significant bit first, so the lexicographic order of words
        // matches the order of bit positions.
        out[bit / 64] |= 1u64 << (63 - bit % 64);
    }
}

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Byte string that is equal for two labeled graphs iff they are isomorphic.
///
/// Costs `n!` encodings.
pub fn canonical_form(g: &LabeledGraph) -> Vec<u8> {
    let n = g.node_count();
    let mut best: Option<Vec<u8>> = None;
    let mut words = Vec::new();
    let mut labels = vec![0usize; n];
    for_each_permutation(n, |perm| {
        for v in 0..n {
            labels[perm[v]] = g.labels[v];
        }
        encode_shape(&g.graph, perm, &mut words);
        let mut bytes = Vec::with_capacity(16 + n * 8 + words.len() * 8);
        bytes.extend_from_slice(&(n as u64).to_be_bytes());
        bytes.extend_from_slice(&(g.graph.edge_symbol_count() as u64).to_be_bytes());
        for &l in &labels {
            bytes.extend_from_slice(&(l as u64).to_be_bytes());
        }
        for w in &words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        if best.as_ref().is_none_or(|b| bytes < *b) {
            best = Some(bytes);
        }
    });
    best.expect("at least one permutation")
}

fn canonical_shape(g: &Graph) -> (Vec<u64>, Vec<usize>) {
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    let mut words = Vec::new();
    for_each_permutation(g.node_count(), |perm| {
        encode_shape(g, perm, &mut words);
        if best.as_ref().is_none_or(|(b, _)| words < *b) {
            best = Some((words.clone(), perm.to_vec()));
        }
    });
    best.expect("at least one permutation")
}

fn relabel_shape(g: &Graph, perm: &[usize]) -> Graph {
    let mut out = Graph::new(g.node_count(), g.edge_symbol_count()).expect("nonempty");
    for (gamma, u, v) in g.all_edges() {
        out.add_edge(gamma, perm[u], perm[v]).expect("valid");
    }
    out
}

/// Permutations `π` with `π(G) = G`.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..g.node_count()).collect();
    let mut reference = Vec::new();
    encode_shape(g, &id, &mut reference);
    let mut out = Vec::new();
    let mut words = Vec::new();
    for_each_permutation(g.node_count(), |perm| {
        encode_shape(g, perm, &mut words);
        if words == reference {
            out.push(perm.to_vec());
        }
    });
    out
}

/// Candidate edge slots at `n` nodes: `(γ, u, v)` with `u ≤ v` in undirected
/// mode.
fn slots(n: usize, edge_symbols: usize, undirected: bool, loops: bool) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for gamma in 0..edge_symbols {
        for u in 0..n {
            for v in 0..n {
                if (undirected && v < u) || (!loops && u == v) {
                    continue;
                }
                out.push((gamma, u, v));
            }
        }
    }
    out
}

fn graph_from_mask(
    n: usize,
    edge_symbols: usize,
    slots: &[(usize, usize, usize)],
    mask: u64,
    undirected: bool,
) -> Graph {
    let mut g = Graph::new(n, edge_symbols).expect("nonempty");
    for (i, &(gamma, u, v)) in slots.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if undirected {
                g.add_undirected(gamma, u, v).expect("valid");
            } else {
                g.add_edge(gamma, u, v).expect("valid");
            }
        }
    }
    g
}

/// Unlabeled graphs with exactly `n` nodes matching `opts`, in deterministic
/// order. With `opts.dedup`, one representative per isomorphism class.
pub fn shapes(n: usize, edge_symbols: usize, opts: EnumOptions) -> Vec<Graph> {
    assert!(n >= 1 && edge_symbols >= 1);
    let undirected = opts.mode == EnumMode::ConnectedUndirected;
    let loops = opts.loops_allowed();
    let keep = |g: &Graph| !undirected || g.is_connected();
    if !opts.dedup {
        let slots = slots(n, edge_symbols, undirected, loops);
        assert!(slots.len() < 64, "too many edge slots for exhaustive enumeration");
        return (0..1u64 << slots.len())
            .map(|mask| graph_from_mask(n, edge_symbols, &slots, mask, undirected))
            .filter(keep)
            .collect();
    }
    // One canonical representative per class of all (not necessarily
    // connected) graphs, grown node by node.
    let mut level: Vec<Graph> = vec![Graph::new(1, edge_symbols).expect("nonempty")];
    if loops {
        level = shapes(1, edge_symbols, opts.dedup(false));
    }
    for m in 2..=n {
        level = extend_classes(&level, m, edge_symbols, undirected, loops);
    }
    level.into_iter().filter(keep).collect()
}

fn extend_classes(
    prev: &[Graph],
    m: usize,
    edge_symbols: usize,
    undirected: bool,
    loops: bool,
) -> Vec<Graph> {
    // Slots touching the new node `m − 1`.
    let new = m - 1;
    let mut fresh = Vec::new();
    for gamma in 0..edge_symbols {
        for u in 0..m {
            if u == new && !loops {
                continue;
            }
            fresh.push((gamma, u, new));
            if !undirected && u != new {
                fresh.push((gamma, new, u));
            }
        }
    }
    assert!(fresh.len() < 64);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for base in prev {
        for mask in 0..1u64 << fresh.len() {
            let mut g = Graph::new(m, edge_symbols).expect("nonempty");
            for (gamma, u, v) in base.all_edges() {
                g.add_edge(gamma, u, v).expect("valid");
            }
            for (i, &(gamma, u, v)) in fresh.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if undirected {
                        g.add_undirected(gamma, u, v).expect("valid");
                    } else {
                        g.add_edge(gamma, u, v).expect("valid");
                    }
                }
            }
            let (key, perm) = canonical_shape(&g);
            if seen.insert(key) {
                out.push(relabel_shape(&g, &perm));
            }
        }
    }
    out
}

/// Labelings of one shape over `k` symbols, lexicographic. With `dedup`,
/// only labelings that are minimal under the shape's automorphism group are
/// produced, i.e. one per isomorphism class of labeled graphs.
pub struct LabelingIter {
    n: usize,
    k: usize,
    automorphisms: Vec<Vec<usize>>,
    current: Option<Vec<usize>>,
}

impl LabelingIter {
    pub fn new(shape: &Graph, k: usize, dedup: bool) -> Self {
        let automorphisms = if dedup {
            automorphisms(shape)
                .into_iter()
                .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
                .collect()
        } else {
            Vec::new()
        };
        LabelingIter {
            n: shape.node_count(),
            k,
            automorphisms,
            current: if k == 0 { None } else { Some(vec![0; shape.node_count()]) },
        }
    }

    fn is_minimal(&self, labels: &[usize]) -> bool {
        // Compare λ with λ∘π for every automorphism π.
        self.automorphisms.iter().all(|perm| {
            for v in 0..self.n {
                let other = labels[perm[v]];
                if other != labels[v] {
                    return labels[v] < other;
                }
            }
            true
        })
    }

    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        // The last position is the least significant digit.
        for i in (0..self.n).rev() {
            cur[i] += 1;
            if cur[i] < self.k {
                return;
            }
            cur[i] = 0;
        }
        self.current = None;
    }
}

impl Iterator for LabelingIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let cur = self.current.clone()?;
            self.advance();
            if self.is_minimal(&cur) {
                return Some(cur);
            }
        }
    }
}

/// Every labeled graph with `1..=n_max` nodes over `node_symbols` labels and
/// `edge_symbols` edge relations, in increasing node count.
pub fn enumerate_graphs(
    node_symbols: usize,
    edge_symbols: usize,
    n_max: usize,
    opts: EnumOptions,
) -> impl Iterator<Item = LabeledGraph> {
    (1..=n_max).flat_map(move |n| {
        shapes(n, edge_symbols, opts).into_iter().flat_map(move |shape| {
            LabelingIter::new(&shape, node_symbols, opts.dedup).map(move |labels| LabeledGraph {
                graph: shape.clone(),
                labels,
            })
        })
    })
}
