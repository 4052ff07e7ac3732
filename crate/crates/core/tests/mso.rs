mod common;

use common::*;
use dga::automaton::builtin;
use dga::constructions::complement;
use dga::graph::{is_k_colorable, Alphabet, Alphabets, Graph, LabeledGraph};
use dga::mso::{compile_mso, eval_mso, exactly_one, mso_of_adga, parse_mso, write_mso, AnnotatedAlphabet, Assignment, MsoFormula};

fn sentence_holds(phi: &MsoFormula, g: &LabeledGraph) -> bool {
    eval_mso(phi, g, &Assignment::new()).unwrap()
}

#[test]
fn color3_sentence() {
    let phi = parse_mso(COLOR3).unwrap();
    assert!(phi.is_sentence());
    let mut f = &phi.formula;
    let mut set_quantifiers = 0;
    while let dga::mso::Formula::Exists(v, body) = f {
        assert!(dga::mso::is_set_var(v));
        set_quantifiers += 1;
        f = body;
    }
    assert_eq!(set_quantifiers, 3);
    let triangle = LabeledGraph::uniform(Graph::with_edges(3, 1, [(0, 0, 1), (0, 1, 2), (0, 2, 0)]).unwrap());
    assert!(sentence_holds(&phi, &triangle));
    let mut k4 = Graph::new(4, 1).unwrap();
    for u in 0..4 {
        for v in u + 1..4 {
            k4.add_undirected(0, u, v).unwrap();
        }
    }
    assert!(!sentence_holds(&phi, &LabeledGraph::uniform(k4.clone())));
    assert!(!is_k_colorable(&k4, 3));
    for g in corpus(&Alphabets::blank(), 3) {
        assert_eq!(sentence_holds(&phi, &g), is_k_colorable(&g.graph, 3), "{g:?}");
    }
}

#[test]
fn compiled_color3_matches_builtin() {
    let a = compile_mso(&parse_mso(COLOR3).unwrap()).unwrap();
    assert_same_language(&a, &builtin::color3(), &corpus(&Alphabets::blank(), 2), "compiled color3");
}

#[test]
fn compiled_suite_matches_evaluation() {
    for src in MSO_SUITE {
        let phi = parse_mso(src).unwrap();
        assert!(phi.formula.quantifier_depth() <= 3, "{src}");
        let a = compile_mso(&phi).unwrap();
        for g in corpus(&phi.alphabets, 3) {
            assert_eq!(a.accepts(&g), sentence_holds(&phi, &g), "{src} on {g:?}");
        }
    }
}

#[test]
fn has_edge_example() {
    let a = compile_mso(&parse_mso("EX x . EX y . edge[blank](x,y)").unwrap()).unwrap();
    for g in corpus(&Alphabets::blank(), 3) {
        assert_eq!(a.accepts(&g), g.graph.edge_count() > 0);
    }
}

fn open_agreement(src: &str, n: usize) {
    let phi = parse_mso(src).unwrap();
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let ann = AnnotatedAlphabet::new(phi.alphabets.nodes.clone(), vars.clone());
    let a = compile_mso(&phi).unwrap();
    assert_eq!(a.alphabets().nodes, ann.alphabet());
    for g in corpus(&phi.alphabets, n) {
        for alpha in Assignment::all(&vars, g.node_count()) {
            let annotated = ann.annotate(&g, &alpha).unwrap();
            assert_eq!(
                a.accepts(&annotated),
                eval_mso(&phi, &g, &alpha).unwrap(),
                "{src} on {g:?} under {alpha:?}"
            );
        }
    }
}

#[test]
fn label_atom_on_annotated_graphs() {
    open_agreement("node_alphabet a b\nlab[a](x)", 2);
}

#[test]
fn open_formulas_on_annotated_graphs() {
    for src in [
        "EX y . edge(x,y)",
        "EX y . edge(y,x) & !x = y",
        "node_alphabet a b\nlab[b](x) -> ALL y . edge(x,y) -> lab[a](y)",
        "x in X <-> edge(x,x)",
        "edge(x,y) & !edge(y,x)",
        "x = y",
    ] {
        open_agreement(src, 3);
    }
}

#[test]
fn negation_is_complement() {
    for src in ["EX x . edge(x,x)", "ALL x . EX y . edge(x,y)", "node_alphabet a b\nEX x . lab[a](x)"] {
        let phi = parse_mso(src).unwrap();
        let neg = MsoFormula::new(phi.alphabets.clone(), dga::mso::Formula::not(phi.formula.clone()));
        let a = compile_mso(&neg).unwrap();
        let b = complement(&compile_mso(&phi).unwrap());
        assert_same_language(&a, &b, &corpus(&phi.alphabets, 3), src);
    }
}

#[test]
fn exactly_one_markers() {
    let ann = AnnotatedAlphabet::new(Alphabet::blank(), ["x".to_string()]);
    let a = exactly_one("x", &ann, Alphabet::blank());
    let g = Graph::with_edges(3, 1, [(0, 0, 1)]).unwrap();
    let marked = |nodes: &[usize]| {
        let labels = (0..3).map(|v| usize::from(nodes.contains(&v))).collect();
        LabeledGraph::new(g.clone(), labels).unwrap()
    };
    assert!(a.accepts(&marked(&[1])));
    assert!(!a.accepts(&marked(&[0, 2])));
    assert!(!a.accepts(&marked(&[0, 1, 2])));
    assert!(!a.accepts(&marked(&[])));
}

#[test]
fn text_round_trip() {
    for src in MSO_SUITE.iter().copied().chain([COLOR3]) {
        let phi = parse_mso(src).unwrap();
        assert_eq!(parse_mso(&write_mso(&phi)).unwrap(), phi, "{src}");
    }
}

fn encode_agrees(a: &dga::automaton::Adga, n: usize, name: &str) {
    let phi = mso_of_adga(a);
    assert!(phi.is_sentence(), "{name}");
    for g in corpus(a.alphabets(), n) {
        assert_eq!(sentence_holds(&phi, &g), a.accepts(&g), "{name} on {g:?}");
    }
}

#[test]
fn encoded_small_automata() {
    let t = builtin::trivial(true);
    let phi = mso_of_adga(&t);
    assert!(corpus(t.alphabets(), 3).iter().all(|g| sentence_holds(&phi, g)));
    encode_agrees(&builtin::color3(), 3, "color3");
    let le1 = mso_of_adga(&builtin::order_le(1));
    for g in corpus(&Alphabets::blank(), 3) {
        assert_eq!(sentence_holds(&le1, &g), g.node_count() <= 1);
    }
}

#[test]
fn encoded_registry() {
    for (name, a) in registry() {
        encode_agrees(&a, 3, name);
    }
}

#[test]
fn encoding_parses_back() {
    let phi = mso_of_adga(&builtin::color3());
    assert_eq!(parse_mso(&write_mso(&phi)).unwrap(), phi);
}
