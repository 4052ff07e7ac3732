//! Line-oriented graph text format.
//!
//! ```text
//! graph
//! nodes 3
//! labels a b c
//! edge blank 0 1
//! undirected
//! ```
//!
//! `#` starts a comment. `undirected` mirrors every listed edge.

use std::fmt::Write as _;

use super::{Alphabet, Alphabets, Graph, GraphError, LabeledGraph, BLANK};

/// A parsed graph file whose symbols are not yet resolved against alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphText {
    pub node_count: usize,
    pub labels: Vec<String>,
    pub edges: Vec<(String, usize, usize)>,
    pub undirected: bool,
}

fn syntax(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<GraphText, GraphError> {
    let mut header = false;
    let mut node_count = None;
    let mut labels = None;
    let mut edges = Vec::new();
    let mut undirected = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else {
            continue;
        };
        if !header {
            if kw != "graph" || !rest.is_empty() {
                return Err(syntax(line, "expected `graph` header"));
            }
            header = true;
            continue;
        }
        match kw {
            "nodes" => {
                let [n] = rest else {
                    return Err(syntax(line, "expected `nodes <n>`"));
                };
                let n: usize = n.parse().map_err(|_| syntax(line, "bad node count"))?;
                if n == 0 {
                    return Err(GraphError::NoNodes);
                }
                node_count = Some(n);
            }
            "labels" => labels = Some(rest.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "edge" => {
                let [gamma, u, v] = rest else {
                    return Err(syntax(line, "expected `edge <γ> <u> <v>`"));
                };
                let u: usize = u.parse().map_err(|_| syntax(line, "bad node id"))?;
                let v: usize = v.parse().map_err(|_| syntax(line, "bad node id"))?;
                edges.push((gamma.to_string(), u, v));
            }
            "undirected" => undirected = true,
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(syntax(1, "missing `graph` header"));
    }
    let node_count = node_count.ok_or_else(|| syntax(0, "missing `nodes` line"))?;
    let labels = labels.unwrap_or_else(|| vec![BLANK.to_string(); node_count]);
    if labels.len() != node_count {
        return Err(GraphError::LabelCount {
            expected: node_count,
            got: labels.len(),
        });
    }
    for &(_, u, v) in &edges {
        if u >= node_count || v >= node_count {
            return Err(GraphError::BadEdge(u, v, node_count));
        }
    }
    Ok(GraphText {
        node_count,
        labels,
        edges,
        undirected,
    })
}

impl GraphText {
    /// Resolves symbols against the given alphabets.
    pub fn resolve(&self, alphabets: &Alphabets) -> Result<LabeledGraph, GraphError> {
        let mut g = Graph::new(self.node_count, alphabets.edges.len())?;
        for (gamma, u, v) in &self.edges {
            let gi = alphabets.edges.lookup(gamma)?;
            if self.undirected {
                g.add_undirected(gi, *u, *v)?;
            } else {
                g.add_edge(gi, *u, *v)?;
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|l| alphabets.nodes.lookup(l))
            .collect::<Result<_, _>>()?;
        LabeledGraph::new(g, labels)
    }

    /// Alphabets read off the file: symbols in order of first appearance,
    /// `{blank}` when no edges are listed.
    pub fn inferred_alphabets(&self) -> Alphabets {
        fn ordered<'a>(it: impl Iterator<Item = &'a String>) -> Vec<String> {
            let mut out: Vec<String> = Vec::new();
            for s in it {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            out
        }
        let nodes = ordered(self.labels.iter());
        let mut edges = ordered(self.edges.iter().map(|(g, _, _)| g));
        if edges.is_empty() {
            edges.push(BLANK.to_string());
        }
        Alphabets::new(
            Alphabet::new(nodes).expect("nonempty, distinct"),
            Alphabet::new(edges).expect("nonempty, distinct"),
        )
    }
}

/// Writes a labeled graph; directed form (every edge listed).
pub fn write_graph(g: &LabeledGraph, alphabets: &Alphabets) -> String {
    let mut out = String::from("graph\n");
    let _ = writeln!(out, "nodes {}", g.node_count());
    out.push_str("labels");
    for &l in &g.labels {
        out.push(' ');
        out.push_str(alphabets.nodes.symbol(l));
    }
    out.push('\n');
    for (gamma, u, v) in g.graph.all_edges() {
        let _ = writeln!(out, "edge {} {} {}", alphabets.edges.symbol(gamma), u, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve() {
        let text = "graph # header\nnodes 3\nlabels a b a\nedge blank 0 1\nedge blank 1 2\nundirected\n";
        let gt = parse_graph(text).unwrap();
        let al = gt.inferred_alphabets();
        assert_eq!(al.nodes.symbols(), ["a", "b"]);
        let g = gt.resolve(&al).unwrap();
        assert!(g.graph.is_undirected());
        assert_eq!(g.graph.edge_count(), 4);
        assert_eq!(g.labels, vec![0, 1, 0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph("nodes 1"), Err(GraphError::Syntax { .. })));
        assert!(matches!(
            parse_graph("graph\nnodes 2\nlabels a"),
            Err(GraphError::LabelCount { .. })
        ));
        assert!(matches!(
            parse_graph("graph\nnodes 2\nedge blank 0 5"),
            Err(GraphError::BadEdge(0, 5, 2))
        ));
        let gt = parse_graph("graph\nnodes 1\nlabels z").unwrap();
        assert!(gt.resolve(&Alphabets::blank()).is_err());
    }

    #[test]
    fn write_round_trip() {
        let gt = parse_graph("graph\nnodes 2\nlabels a b\nedge e 0 1\nedge f 1 1\n").unwrap();
        let al = gt.inferred_alphabets();
        let g = gt.resolve(&al).unwrap();
        let again = parse_graph(&write_graph(&g, &al)).unwrap().resolve(&al).unwrap();
        assert_eq!(g, again);
    }
}
