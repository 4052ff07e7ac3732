//! Finite node-labeled, edge-labeled directed graphs.
//!
//! Nodes are dense ids `0..n`. Every edge relation is indexed by the position
//! of its symbol in the edge alphabet, and node labels are positions in the
//! node alphabet. Undirected graphs are stored as symmetric edge sets.
//! Isomorphism is only taken into account at the explicit canonicalization
//! points in [`canonical_form`] and [`enumerate`].

mod enumerate;
mod format;

pub use enumerate::{
    automorphisms, canonical_form, enumerate_graphs, permute, shapes, EnumMode, EnumOptions,
    LabelingIter,
};
pub use format::{parse_graph, write_graph, GraphText};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// The default single symbol used when an alphabet is irrelevant.
pub const BLANK: &str = "blank";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("graphs must have at least one node")]
    NoNodes,
    #[error("edge ({0},{1}) references a node outside 0..{2}")]
    BadEdge(usize, usize, usize),
    #[error("edge symbol index {0} out of range")]
    BadEdgeSymbol(usize),
    #[error("labeling has {got} entries but the graph has {expected} nodes")]
    LabelCount { expected: usize, got: usize },
    #[error("label index {0} is outside the alphabet")]
    LabelOutOfRange(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// An ordered finite set of distinct symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(GraphError::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(GraphError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn blank() -> Self {
        Alphabet::new([BLANK]).expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, s: &str) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn lookup(&self, s: &str) -> Result<usize, GraphError> {
        self.index_of(s)
            .ok_or_else(|| GraphError::UnknownSymbol(s.to_string()))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.symbols).finish()
    }
}

/// Node alphabet Σ and edge alphabet Γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabets {
    pub nodes: Alphabet,
    pub edges: Alphabet,
}

impl Alphabets {
    pub fn new(nodes: Alphabet, edges: Alphabet) -> Self {
        Alphabets { nodes, edges }
    }

    /// `⟨{blank}, {blank}⟩`.
    pub fn blank() -> Self {
        Alphabets::new(Alphabet::blank(), Alphabet::blank())
    }

    /// Node alphabet from the given symbols, blank edge alphabet.
    pub fn with_labels<I, S>(labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ok(Alphabets::new(Alphabet::new(labels)?, Alphabet::blank()))
    }
}

/// A Γ-graph: `node_count` nodes and one edge relation per edge symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    node_count: usize,
    edges: Vec<BTreeSet<(usize, usize)>>,
}

impl Graph {
    /// Edgeless graph with `node_count` nodes over `edge_symbols` relations.
    pub fn new(node_count: usize, edge_symbols: usize) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::NoNodes);
        }
        if edge_symbols == 0 {
            return Err(GraphError::EmptyAlphabet);
        }
        Ok(Graph {
            node_count,
            edges: vec![BTreeSet::new(); edge_symbols],
        })
    }

    pub fn add_edge(&mut self, gamma: usize, u: usize, v: usize) -> Result<(), GraphError> {
        if gamma >= self.edges.len() {
            return Err(GraphError::BadEdgeSymbol(gamma));
        }
        if u >= self.node_count || v >= self.node_count {
            return Err(GraphError::BadEdge(u, v, self.node_count));
        }
        self.edges[gamma].insert((u, v));
        Ok(())
    }

    /// Adds `u → v` and `v → u`.
    pub fn add_undirected(&mut self, gamma: usize, u: usize, v: usize) -> Result<(), GraphError> {
        self.add_edge(gamma, u, v)?;
        self.add_edge(gamma, v, u)
    }

    pub fn with_edges(
        node_count: usize,
        edge_symbols: usize,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(node_count, edge_symbols)?;
        for (gamma, u, v) in edges {
            g.add_edge(gamma, u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_symbol_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, gamma: usize) -> &BTreeSet<(usize, usize)> {
        &self.edges[gamma]
    }

    pub fn has_edge(&self, gamma: usize, u: usize, v: usize) -> bool {
        self.edges[gamma].contains(&(u, v))
    }

    /// All `(γ, u, v)` triples.
    pub fn all_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(g, set)| set.iter().map(move |&(u, v)| (g, u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }

    pub fn has_self_loop(&self) -> bool {
        self.all_edges().any(|(_, u, v)| u == v)
    }

    /// `incoming[γ][v]` lists the γ-predecessors of `v`.
    pub fn incoming(&self) -> Vec<Vec<Vec<usize>>> {
        let mut inc = vec![vec![Vec::new(); self.node_count]; self.edges.len()];
        for (g, u, v) in self.all_edges() {
            inc[g][v].push(u);
        }
        inc
    }

    /// True iff every γ-edge has its mirror under the same γ.
    pub fn is_undirected(&self) -> bool {
        self.edges
            .iter()
            .all(|set| set.iter().all(|&(u, v)| set.contains(&(v, u))))
    }

    /// Weak connectivity; edge direction and symbol are ignored.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count;
        let mut adj = vec![Vec::new(); n];
        for (_, u, v) in self.all_edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Copy of the graph with node `v` duplicated (together with all of its
    /// incoming and outgoing edges). The copy gets id `n`.
    pub fn duplicate_node(&self, v: usize) -> Graph {
        let n = self.node_count;
        let mut g = Graph {
            node_count: n + 1,
            edges: self.edges.clone(),
        };
        for (gamma, set) in self.edges.iter().enumerate() {
            for &(a, b) in set {
                let a2 = if a == v { n } else { a };
                let b2 = if b == v { n } else { b };
                g.edges[gamma].insert((a2, b2));
                g.edges[gamma].insert((a2, b));
                g.edges[gamma].insert((a, b2));
            }
        }
        g
    }
}

/// A Σ-labeled Γ-graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<usize>,
}

impl LabeledGraph {
    pub fn new(graph: Graph, labels: Vec<usize>) -> Result<Self, GraphError> {
        if labels.len() != graph.node_count() {
            return Err(GraphError::LabelCount {
                expected: graph.node_count(),
                got: labels.len(),
            });
        }
        Ok(LabeledGraph { graph, labels })
    }

    /// Every node labeled with symbol 0.
    pub fn uniform(graph: Graph) -> Self {
        let n = graph.node_count();
        LabeledGraph {
            graph,
            labels: vec![0; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Checks labels and edge symbols against the alphabets.
    pub fn check(&self, alphabets: &Alphabets) -> Result<(), GraphError> {
        if self.graph.edge_symbol_count() != alphabets.edges.len() {
            return Err(GraphError::BadEdgeSymbol(self.graph.edge_symbol_count()));
        }
        match self.labels.iter().find(|&&l| l >= alphabets.nodes.len()) {
            Some(&l) => Err(GraphError::LabelOutOfRange(l)),
            None => Ok(()),
        }
    }

    /// No two adjacent nodes share a label; a self-loop makes this false.
    pub fn is_valid_coloring(&self) -> bool {
        self.graph
            .all_edges()
            .all(|(_, u, v)| self.labels[u] != self.labels[v])
    }

    pub fn duplicate_node(&self, v: usize) -> LabeledGraph {
        let mut labels = self.labels.clone();
        labels.push(self.labels[v]);
        LabeledGraph {
            graph: self.graph.duplicate_node(v),
            labels,
        }
    }
}

/// Exhaustive search over all `k^n` labelings. Intended as a test oracle.
pub fn is_k_colorable(graph: &Graph, k: usize) -> bool {
    if k == 0 || graph.has_self_loop() {
        return false;
    }
    let n = graph.node_count();
    let edges: Vec<(usize, usize)> = graph.all_edges().map(|(_, u, v)| (u, v)).collect();
    let mut colors = vec![0usize; n];
    loop {
        if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// A node projection `h: Σ → Σ'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub source: Alphabet,
    pub target: Alphabet,
    mapping: Vec<usize>,
}

impl Projection {
    pub fn new(source: Alphabet, target: Alphabet, mapping: Vec<usize>) -> Result<Self, GraphError> {
        if mapping.len() != source.len() {
            return Err(GraphError::LabelCount {
                expected: source.len(),
                got: mapping.len(),
            });
        }
        if let Some(&bad) = mapping.iter().find(|&&t| t >= target.len()) {
            return Err(GraphError::LabelOutOfRange(bad));
        }
        Ok(Projection {
            source,
            target,
            mapping,
        })
    }

    /// Builds a projection from `(source symbol, target symbol)` pairs.
    pub fn from_pairs<'a>(
        source: Alphabet,
        target: Alphabet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut mapping = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            mapping[source.lookup(a)?] = target.lookup(b)?;
        }
        if let Some(i) = mapping.iter().position(|&m| m == usize::MAX) {
            return Err(GraphError::UnknownSymbol(format!(
                "no image for `{}`",
                source.symbol(i)
            )));
        }
        Projection::new(source, target, mapping)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let mapping = (0..alphabet.len()).collect();
        Projection {
            target: alphabet.clone(),
            source: alphabet,
            mapping,
        }
    }

    /// Maps every source symbol onto the single symbol `blank`.
    pub fn collapse(source: Alphabet) -> Self {
        let mapping = vec![0; source.len()];
        Projection {
            source,
            target: Alphabet::blank(),
            mapping,
        }
    }

    pub fn image(&self, a: usize) -> usize {
        self.mapping[a]
    }

    pub fn preimages(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.mapping
            .iter()
            .enumerate()
            .filter(move |&(_, &t)| t == b)
            .map(|(a, _)| a)
    }
}

/// `h(G_λ) = G_{h∘λ}`.
pub fn apply_projection(h: &Projection, g: &LabeledGraph) -> Result<LabeledGraph, GraphError> {
    let labels = g
        .labels
        .iter()
        .map(|&l| {
            h.mapping
                .get(l)
                .copied()
                .ok_or(GraphError::LabelOutOfRange(l))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabeledGraph {
        graph: g.graph.clone(),
        labels,
    })
}
