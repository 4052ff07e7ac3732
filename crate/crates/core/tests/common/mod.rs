#![allow(dead_code)]

use dga::automaton::builtin;
use dga::automaton::{contains, Adga, AdgaBuilder, BoolExpr, Kind};
use dga::graph::{enumerate_graphs, Alphabets, EnumMode, EnumOptions, LabeledGraph};

/// Every graph with at most `n` nodes over the alphabets, one per isomorphism class.
pub fn corpus(al: &Alphabets, n: usize) -> Vec<LabeledGraph> {
    enumerate_graphs(al.nodes.len(), al.edges.len(), n, EnumOptions::new(EnumMode::AllDirected)).collect()
}

pub fn connected_corpus(al: &Alphabets, n: usize) -> Vec<LabeledGraph> {
    enumerate_graphs(al.nodes.len(), al.edges.len(), n, EnumOptions::new(EnumMode::ConnectedUndirected)).collect()
}

pub fn registry() -> Vec<(&'static str, Adga)> {
    builtin::registry()
}

pub fn blank_registry() -> Vec<(&'static str, Adga)> {
    registry()
        .into_iter()
        .filter(|(_, a)| a.alphabets() == &Alphabets::blank())
        .collect()
}

pub fn assert_same_language(a: &Adga, b: &Adga, graphs: &[LabeledGraph], what: &str) {
    for g in graphs {
        assert_eq!(a.accepts(g), b.accepts(g), "{what}: disagreement on {g:?}");
    }
}

pub const COLOR3: &str = "EX Us, Uh, Uc . \
    (ALL u . (u in Us | u in Uh | u in Uc) & !(u in Us & u in Uh) & !(u in Us & u in Uc) & !(u in Uh & u in Uc)) \
    & (ALL u, v . edge(u,v) -> !(u in Us & v in Us) & !(u in Uh & v in Uh) & !(u in Uc & v in Uc))";

pub const MSO_SUITE: [&str; 12] = [
    "EX x . EX y . edge(x,y)",
    "ALL x . EX y . edge(x,y)",
    "EX x . edge(x,x)",
    "ALL x, y . edge(x,y) -> edge(y,x)",
    "EX x, y . !x = y",
    "node_alphabet a b\nALL x . lab[a](x)",
    "node_alphabet a b\nEX x . lab[a](x) & EX y . lab[b](y) & edge(x,y)",
    "node_alphabet a b\nEX X . ALL x . (x in X <-> lab[a](x))",
    "EX X . (EX x . x in X) & ALL x, y . x in X & edge(x,y) -> !y in X",
    "node_alphabet a b\nALL x . (EX y . edge(y,x)) | lab[b](x)",
    "EX x . ALL y . x = y | edge(x,y)",
    "ALL X . (EX x . x in X) -> EX y . y in X",
];

/// `ini -> s1 -> ... -> {yes, no}`, one state per level.
pub fn chain(states: usize) -> Adga {
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let mut prev = b.declare("ini", Kind::Existential);
    b.init(0, prev);
    for k in 1..states - 2 {
        let s = b.declare(format!("s{k}"), Kind::Existential);
        b.rule(prev, BoolExpr::t(), [s]);
        prev = s;
    }
    let yes = b.declare("yes", Kind::Permanent);
    let no = b.declare("no", Kind::Permanent);
    b.rule(prev, contains(0, prev), [yes]);
    b.rule(prev, BoolExpr::not(contains(0, prev)), [no]);
    b.accept_set(&[yes]);
    b.build().unwrap()
}
