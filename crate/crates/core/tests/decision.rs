mod common;

use common::*;
use dga::automaton::builtin::{self, builtin};
use dga::automaton::{Adga, AdgaBuilder, BoolExpr, Class, Kind};
use dga::constructions::complement;
use dga::decision::*;
use dga::graph::{Alphabets, EnumMode};
use num_bigint::BigUint;

fn value(b: Bound) -> BigUint {
    match b {
        Bound::Value(v) => v,
        Bound::Overflow => panic!("overflow"),
    }
}

#[test]
fn bounds() {
    let a = chain(4);
    assert_eq!((a.state_count(), a.length()), (4, 2));
    assert_eq!(value(emptiness_bound(&a, EnumMode::AllDirected).unwrap()), BigUint::from(64u32));

    let t = builtin::trivial(true);
    assert_eq!(value(emptiness_bound(&t, EnumMode::AllDirected).unwrap()), BigUint::from(1u32));

    let a = chain(3);
    assert_eq!((a.state_count(), a.length()), (3, 1));
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let s = b.declare("s", Kind::Existential);
    let p = b.declare("p", Kind::Permanent);
    b.init(0, s);
    b.rule(s, BoolExpr::t(), [p]);
    b.accept_set(&[p]);
    let two = b.build().unwrap();
    assert_eq!(value(emptiness_bound(&two, EnumMode::ConnectedUndirected).unwrap()), BigUint::from(64u32));

    let big = builtin::order_ge(40);
    assert_eq!(emptiness_bound_within(&big, EnumMode::ConnectedUndirected, 64).unwrap(), Bound::Overflow);
    let exact = value(emptiness_bound(&big, EnumMode::ConnectedUndirected).unwrap());
    let q = big.state_count() as u32;
    assert_eq!(big.length(), 1);
    assert_eq!(exact, (BigUint::from(q) << q).pow(2));
    assert!(matches!(
        emptiness_bound(&builtin::not_color3(), EnumMode::AllDirected),
        Err(DecisionError::NotNondeterministic(Class::Adga))
    ));
}

#[test]
fn minimal_member_of_order_ge3() {
    match find_member(&builtin::order_ge(3), EnumMode::AllDirected, 5).unwrap() {
        SearchOutcome::Counterexample(g) => assert_eq!(g.node_count(), 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_condition_is_exactly_empty() {
    let outcome = find_member(&builtin::trivial(false), EnumMode::AllDirected, DEFAULT_CAP).unwrap();
    assert_eq!(outcome, SearchOutcome::EmptyUpTo { n_checked: 1, exact: true });
}

#[test]
fn color3_single_node() {
    match find_member(&builtin::color3(), EnumMode::ConnectedUndirected, 2).unwrap() {
        SearchOutcome::Counterexample(g) => assert_eq!(g.node_count(), 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn alternation_is_refused_but_probed() {
    let a = builtin::not_color3();
    assert!(find_member(&a, EnumMode::AllDirected, 4).is_err());
    match bounded_probe(&a, EnumMode::AllDirected, 4).unwrap() {
        SearchOutcome::Counterexample(g) => assert!(a.accepts(&g) && g.node_count() == 1),
        other => panic!("{other:?}"),
    }
    let none = bounded_probe(&builtin::trivial(false), EnumMode::AllDirected, 2).unwrap();
    assert_eq!(none, SearchOutcome::EmptyUpTo { n_checked: 2, exact: false });
    assert_eq!(find_member(&a, EnumMode::AllDirected, 0), Err(DecisionError::ZeroCap));
}

#[test]
fn counterexamples_are_minimal_and_accepted() {
    for (name, a) in registry().into_iter().filter(|(_, a)| a.class() != Class::Adga) {
        let n = if a.alphabets().nodes.len() == 1 { 4 } else { 3 };
        let oracle = corpus(a.alphabets(), n).into_iter().find(|g| a.accepts(g)).map(|g| g.node_count());
        match find_member(&a, EnumMode::AllDirected, n).unwrap() {
            SearchOutcome::Counterexample(g) => {
                assert!(a.accepts(&g), "{name}");
                assert_eq!(Some(g.node_count()), oracle, "{name}");
            }
            SearchOutcome::EmptyUpTo { n_checked, exact } => {
                assert_eq!(oracle, None, "{name}");
                if exact {
                    // The whole language is empty, so no larger corpus graph is accepted.
                    assert!(corpus(a.alphabets(), n).iter().all(|g| !a.accepts(g)), "{name}");
                }
                assert!(n_checked <= n);
            }
        }
    }
}

fn label_check(all: bool) -> Adga {
    let al = Alphabets::with_labels(["p", "q"]).unwrap();
    let mut b = AdgaBuilder::new(al);
    let yes = b.declare("yes", Kind::Permanent);
    let no = b.declare("no", Kind::Permanent);
    b.init(0, yes);
    b.init(1, no);
    if all {
        b.accept(BoolExpr::not(BoolExpr::atom(no)));
    } else {
        b.accept(BoolExpr::atom(yes));
    }
    b.build().unwrap()
}

#[test]
fn inclusion_examples() {
    let (all_p, some_p) = (label_check(true), label_check(false));
    for a in [&all_p, &some_p] {
        assert_eq!(a.class(), Class::Ddga);
        assert!(matches!(
            inclusion_ddga(a, a, EnumMode::AllDirected, 3).unwrap(),
            Inclusion::Holds { .. }
        ));
    }
    assert!(matches!(
        inclusion_ddga(&all_p, &some_p, EnumMode::AllDirected, 3).unwrap(),
        Inclusion::Holds { .. }
    ));
    for g in corpus(all_p.alphabets(), 3) {
        assert!(!all_p.accepts(&g) || some_p.accepts(&g));
    }
    match inclusion_ddga(&some_p, &all_p, EnumMode::AllDirected, 3).unwrap() {
        Inclusion::Violation(g) => {
            assert_eq!(g.node_count(), 2);
            assert!(some_p.accepts(&g) && !all_p.accepts(&g));
            assert!(g.labels.contains(&0) && g.labels.contains(&1));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        inclusion_ddga(&builtin::color3(), &all_p, EnumMode::AllDirected, 3),
        Err(DecisionError::NotDeterministic(Class::Ndga))
    ));
    assert_eq!(
        inclusion_ddga(&builtin("colored(x,y)").unwrap(), &all_p, EnumMode::AllDirected, 3),
        Err(DecisionError::AlphabetMismatch)
    );
}

#[test]
fn equivalence_examples() {
    let c = builtin("colored(x,y)").unwrap();
    let o = builtin("occur(x,y)").unwrap();
    assert!(matches!(
        equivalence_ddga(&c, &c, EnumMode::AllDirected, 3).unwrap(),
        Equivalence::Equivalent { .. }
    ));
    assert!(matches!(
        equivalence_ddga(&complement(&complement(&o)), &o, EnumMode::AllDirected, 3).unwrap(),
        Equivalence::Equivalent { .. }
    ));
    match equivalence_ddga(&c, &o, EnumMode::AllDirected, 3).unwrap() {
        Equivalence::Differs { only_first: Some(g1), only_second: Some(g2) } => {
            assert!(c.accepts(&g1) && !o.accepts(&g1));
            assert!(o.accepts(&g2) && !c.accepts(&g2));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn tiny_exact_bound_agrees_with_corpus() {
    // A length-0 automaton with two states has bound 2: exact answers must
    // match every corpus graph.
    for all in [true, false] {
        let a = label_check(all);
        let diff = dga::constructions::product(&a, &complement(&a), dga::constructions::Combine::And).unwrap();
        let out = find_member(&diff, EnumMode::AllDirected, 6).unwrap();
        let SearchOutcome::EmptyUpTo { exact: true, .. } = out else { panic!("{out:?}") };
        assert!(corpus(a.alphabets(), 3).iter().all(|g| !diff.accepts(g)));
    }
}
