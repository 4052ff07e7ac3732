mod common;

use common::*;
use dga::automaton::builtin::{self, builtin};
use dga::automaton::Class;
use dga::constructions::{complement, intersect_adga, product, project, union, Combine, ConstructionError};
use dga::graph::{apply_projection, is_k_colorable, Alphabet, Alphabets, LabeledGraph, Projection};

#[test]
fn complement_negates_on_registry() {
    for (name, a) in registry() {
        let c = complement(&a);
        for g in corpus(a.alphabets(), 3) {
            assert_eq!(c.accepts(&g), !a.accepts(&g), "{name} on {g:?}");
        }
    }
}

#[test]
fn complement_of_color3_is_not_color3() {
    let c = complement(&builtin::color3());
    let n = builtin::not_color3();
    assert_same_language(&c, &n, &corpus(&Alphabets::blank(), 4), "complement(color3)");
}

#[test]
fn complement_is_an_involution() {
    for (name, a) in registry() {
        let cc = complement(&complement(&a));
        assert_same_language(&a, &cc, &corpus(a.alphabets(), 3), name);
    }
}

#[test]
fn complement_of_full_condition_rejects_all() {
    let a = builtin::trivial(true);
    let c = complement(&a);
    assert!(corpus(a.alphabets(), 3).iter().all(|g| !c.accepts(g)));
}

#[test]
fn deterministic_complement_flips_condition() {
    for (name, a) in registry().into_iter().filter(|(_, a)| a.class() == Class::Ddga) {
        let c = complement(&a);
        assert_eq!(c.class(), Class::Ddga, "{name}");
        let flipped = a.with_accepting(dga::automaton::BoolExpr::not(a.accepting().clone()));
        assert!(c.same_as(&flipped), "{name}");
    }
}

#[test]
fn union_and_intersection_identities() {
    let reg = blank_registry();
    let graphs = corpus(&Alphabets::blank(), 3);
    for (n1, a1) in &reg {
        let r1: Vec<bool> = graphs.iter().map(|g| a1.accepts(g)).collect();
        for (n2, a2) in &reg {
            let r2: Vec<bool> = graphs.iter().map(|g| a2.accepts(g)).collect();
            let u = union(a1, a2).unwrap();
            let i = intersect_adga(a1, a2).unwrap();
            for (k, g) in graphs.iter().enumerate() {
                assert_eq!(u.accepts(g), r1[k] || r2[k], "{n1} ∪ {n2} on {g:?}");
                assert_eq!(i.accepts(g), r1[k] && r2[k], "{n1} ∩ {n2} on {g:?}");
            }
        }
    }
}

#[test]
fn union_on_labeled_registry() {
    let a = builtin("colored(x,y)").unwrap();
    let b = builtin("occur(x,y)").unwrap();
    let u = union(&a, &b).unwrap();
    let i = intersect_adga(&a, &complement(&b)).unwrap();
    for g in corpus(a.alphabets(), 3) {
        assert_eq!(u.accepts(&g), a.accepts(&g) || b.accepts(&g));
        assert_eq!(i.accepts(&g), a.accepts(&g) && !b.accepts(&g));
    }
}

#[test]
fn union_examples() {
    let graphs = corpus(&Alphabets::blank(), 4);
    let u = union(&builtin::order_le(1), &builtin::order_ge(3)).unwrap();
    for g in &graphs {
        let n = g.node_count();
        assert_eq!(u.accepts(g), n == 1 || n >= 3);
    }
    let c = builtin::color3();
    let all = union(&c, &complement(&c)).unwrap();
    assert!(graphs.iter().all(|g| all.accepts(g)));
    let i = intersect_adga(&builtin::order_le(3), &builtin::order_ge(2)).unwrap();
    for g in &graphs {
        assert_eq!(i.accepts(g), (2..=3).contains(&g.node_count()));
    }
}

#[test]
fn union_with_itself() {
    for (name, a) in registry() {
        let u = union(&a, &a).unwrap();
        assert_same_language(&a, &u, &corpus(a.alphabets(), 3), name);
    }
}

#[test]
fn products() {
    let c = builtin::color3();
    let cc = product(&c, &c, Combine::And).unwrap();
    assert_same_language(&c, &cc, &corpus(c.alphabets(), 3), "color3 × color3");

    let col = builtin("colored(x,y)").unwrap();
    let occ = builtin("occur(x,y)").unwrap();
    let both = product(&col, &occ, Combine::And).unwrap();
    let either = product(&col, &occ, Combine::Or).unwrap();
    assert_eq!(either.class(), Class::Ddga);
    for g in corpus(col.alphabets(), 3) {
        let oracle_col = g.is_valid_coloring();
        let oracle_occ = g.labels.contains(&0) && g.labels.contains(&1);
        assert_eq!(both.accepts(&g), oracle_col && oracle_occ, "{g:?}");
        assert_eq!(either.accepts(&g), oracle_col || oracle_occ, "{g:?}");
    }
}

#[test]
fn product_preconditions() {
    let err = product(&builtin::not_color3(), &builtin::color3(), Combine::And).unwrap_err();
    assert!(matches!(err, ConstructionError::ClassPrecondition(_)));
    let err = product(&builtin::color3(), &builtin::color3(), Combine::Or).unwrap_err();
    assert!(matches!(err, ConstructionError::ClassPrecondition(_)));
    let err = product(&builtin::color3(), &builtin("colored(x,y)").unwrap(), Combine::And).unwrap_err();
    assert_eq!(err, ConstructionError::AlphabetMismatch);
}

fn preimage_oracle(a: &dga::automaton::Adga, h: &Projection, g: &LabeledGraph) -> bool {
    // Some labeling mapped onto g's labels by h is accepted.
    let n = g.node_count();
    let k = h.source.len();
    (0..k.pow(n as u32)).any(|mut code| {
        let labels: Vec<usize> = (0..n)
            .map(|_| {
                let l = code % k;
                code /= k;
                l
            })
            .collect();
        let pre = LabeledGraph::new(g.graph.clone(), labels).unwrap();
        apply_projection(h, &pre).unwrap().labels == g.labels && a.accepts(&pre)
    })
}

#[test]
fn projections() {
    let rgb = builtin("colored(r,g,b)").unwrap();
    let h = Projection::collapse(rgb.alphabets().nodes.clone());
    let p = project(&rgb, &h).unwrap();
    for g in corpus(&Alphabets::blank(), 4) {
        assert_eq!(p.accepts(&g), is_k_colorable(&g.graph, 3), "{g:?}");
    }

    let abc = builtin("occur(a,b,c)").unwrap();
    let p = project(&abc, &Projection::collapse(abc.alphabets().nodes.clone())).unwrap();
    for g in corpus(&Alphabets::blank(), 4) {
        assert_eq!(p.accepts(&g), g.node_count() >= 3);
    }

    for (name, a) in registry() {
        let id = project(&a, &Projection::identity(a.alphabets().nodes.clone())).unwrap();
        assert_same_language(&a, &id, &corpus(a.alphabets(), 3), name);
    }
}

#[test]
fn projection_matches_preimage_search() {
    let source = Alphabet::new(["x", "y", "z"]).unwrap();
    let target = Alphabet::new(["u", "v"]).unwrap();
    let h = Projection::from_pairs(source, target, [("x", "u"), ("y", "u"), ("z", "v")]).unwrap();
    for a in [builtin("colored(x,y,z)").unwrap(), builtin("occur(x,y,z)").unwrap()] {
        let p = project(&a, &h).unwrap();
        let al = p.alphabets().clone();
        for g in corpus(&al, 3) {
            assert_eq!(p.accepts(&g), preimage_oracle(&a, &h, &g), "{g:?}");
        }
    }
    // A target label without preimages is never accepted.
    let h = Projection::new(
        Alphabet::new(["x", "y"]).unwrap(),
        Alphabet::new(["u", "v"]).unwrap(),
        vec![0, 0],
    )
    .unwrap();
    let p = project(&builtin("colored(x,y)").unwrap(), &h).unwrap();
    let al = p.alphabets().clone();
    for g in corpus(&al, 2) {
        if g.labels.contains(&1) {
            assert!(!p.accepts(&g));
        }
    }
}
