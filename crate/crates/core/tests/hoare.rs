mod common;

use dga::automaton::Class;
use dga::decision::Inclusion;
use dga::dpl::{parse_assertion, parse_dpl, step_round, GlobalCmd, Program, StateSpace};
use dga::hoare::{check, compile_assertion, holds, program_edges, vcgen, Assertion, CheckOptions, HoareError, VcKind};
use dga::graph::{Graph, LabeledGraph};

const FLOODMAX: &str = include_str!("../../../data/floodmax.dpl");
const WEAK: &str = include_str!("../../../data/floodmax_weak_invariant.dpl");
const FORGETFUL: &str = include_str!("../../../data/floodmax_forgetful.dpl");

fn floodmax_over(domain: &str) -> Program {
    parse_dpl(&FLOODMAX.replace("domain 0 1 2", &format!("domain {domain}"))).unwrap()
}

/// Every assertion written in the FloodMax proof, plus its atoms.
fn assertion_corpus(p: &Program) -> Vec<Assertion> {
    let GlobalCmd::While { cond, invariant, .. } = &p.body[1] else { panic!() };
    let mut out = vec![
        p.require.clone().unwrap().0,
        invariant.clone().unwrap(),
        p.ensure.clone().unwrap().0,
        cond.clone(),
        parse_assertion("all v: v.m = v.m_ini && v.m_old = 0", &p.space).unwrap(),
    ];
    for a in [invariant.clone().unwrap(), p.ensure.clone().unwrap().0] {
        if let Assertion::And(parts) = a {
            out.extend(parts);
        }
    }
    out
}

fn state(space: &StateSpace, vals: &[Vec<u32>], edges: &[(usize, usize)]) -> LabeledGraph {
    let mut g = Graph::new(vals.len(), 1).unwrap();
    for &(u, v) in edges {
        g.add_undirected(0, u, v).unwrap();
    }
    space.label_graph(g, vals)
}

#[test]
fn compiled_assertions_match_the_interpreter() {
    let p = floodmax_over("0 1");
    let graphs = common::connected_corpus(&p.space.alphabets(), 3);
    for a in assertion_corpus(&p) {
        let automaton = compile_assertion(&a, &p.space, &program_edges());
        assert_eq!(automaton.class(), Class::Ddga, "{}", a.display(&p.space));
        for g in &graphs {
            assert_eq!(automaton.accepts(g), holds(&a, &p.space, g), "{} on {g:?}", a.display(&p.space));
        }
    }
}

#[test]
fn boolean_structure_is_preserved() {
    let p = floodmax_over("0 1");
    let graphs = common::connected_corpus(&p.space.alphabets(), 3);
    let atoms = assertion_corpus(&p);
    let compile = |a: &Assertion| compile_assertion(a, &p.space, &program_edges());
    for (i, a) in atoms.iter().enumerate().skip(3) {
        let b = &atoms[i - 1];
        let (ca, cb) = (compile(a), compile(b));
        let not = compile(&a.clone().negate());
        let and = compile(&Assertion::And(vec![a.clone(), b.clone()]));
        let or = compile(&Assertion::Or(vec![a.clone(), b.clone()]));
        for g in &graphs {
            assert_eq!(not.accepts(g), !ca.accepts(g));
            assert_eq!(and.accepts(g), ca.accepts(g) && cb.accepts(g));
            assert_eq!(or.accepts(g), ca.accepts(g) || cb.accepts(g));
        }
    }
}

#[test]
fn atom_examples() {
    let space = floodmax_over("0 1 2").space;
    let edges = program_edges();
    let changed = parse_assertion("some v: v.m != v.m_old", &space).unwrap();
    let g = state(&space, &[vec![1, 0, 0], vec![0, 0, 0]], &[(0, 1)]);
    assert!(compile_assertion(&changed, &space, &edges).accepts(&g));
    let edge = parse_assertion("alledges u v: u.m_old <= v.m", &space).unwrap();
    let lonely = state(&space, &[vec![0, 2, 0]], &[]);
    assert!(compile_assertion(&edge, &space, &edges).accepts(&lonely));
    let looped = state(&space, &[vec![0, 2, 0]], &[(0, 0)]);
    assert!(!compile_assertion(&edge, &space, &edges).accepts(&looped));
}

#[test]
fn invariant_holds_after_initialization() {
    let p = floodmax_over("0 1");
    let GlobalCmd::Each { block, .. } = &p.body[0] else { panic!() };
    let GlobalCmd::While { invariant, .. } = &p.body[1] else { panic!() };
    let theta = compile_assertion(invariant.as_ref().unwrap(), &p.space, &program_edges());
    let pre = &p.require.as_ref().unwrap().0;
    for g in common::connected_corpus(&p.space.alphabets(), 3) {
        if holds(pre, &p.space, &g) {
            assert!(theta.accepts(&step_round(block, &p.space, &g)));
        }
    }
}

#[test]
fn condition_counts() {
    let p = floodmax_over("0 1 2");
    let kinds: Vec<VcKind> = vcgen(&p).unwrap().iter().map(|vc| vc.kind).collect();
    assert_eq!(kinds, [VcKind::Entry, VcKind::Preservation, VcKind::Exit]);

    let straight = "program s\ndomain 0 1\nvars m\nrequire { all v: v.m = 0 }\neach v { v.m := 1; }\nensure { all v: v.m = 1 }\n";
    assert_eq!(vcgen(&parse_dpl(straight).unwrap()).unwrap().len(), 1);

    let nested = "program n\ndomain 0 1\nvars m k\n\
                  while some v: v.m = 0 invariant { true } {\n\
                    assert { true }\n\
                    while some v: v.k = 0 invariant { true } { each v { v.k := 1; } }\n\
                    each v { v.m := 1; }\n\
                  }\n\
                  assert { true }\n";
    let vcs = vcgen(&parse_dpl(nested).unwrap()).unwrap();
    assert_eq!(vcs.len(), 2 * 2 + 1 + 2);

    let loose = "program l\ndomain 0 1\nvars m\nwhile some v: v.m = 0 { each v { v.m := 1; } }\n";
    assert!(matches!(vcgen(&parse_dpl(loose).unwrap()), Err(HoareError::MissingInvariant(4))));
}

#[test]
fn straight_line_program_verifies() {
    let text = "program s\ndomain 0 1\nvars m\nrequire { some v: v.m = 1 }\n\
                each v { send v.m receive M; v.m := max(M + {v.m}); }\n\
                ensure { some v: v.m = 1 }\n";
    let report = check(&parse_dpl(text).unwrap(), CheckOptions::new(3)).unwrap();
    assert!(report.verified());
    let wrong = text.replace("ensure { some v: v.m = 1 }", "ensure { all v: v.m = 1 }");
    let report = check(&parse_dpl(&wrong).unwrap(), CheckOptions::new(3)).unwrap();
    let (vc, g) = report.violations().next().unwrap();
    assert!(vc.replays(&report.space, g));
}

#[test]
fn floodmax_invariant_is_not_inductive() {
    let p = floodmax_over("0 1 2");
    let report = check(&p, CheckOptions::new(3)).unwrap();
    let verdicts: Vec<(VcKind, bool)> =
        report.results.iter().map(|r| (r.vc.kind, matches!(r.verdict, Inclusion::Holds { .. }))).collect();
    assert_eq!(verdicts, [(VcKind::Entry, true), (VcKind::Preservation, false), (VcKind::Exit, true)]);
    let (vc, g) = report.violations().next().unwrap();
    assert!(vc.replays(&p.space, g));
    // Two neighbors; the larger value is nobody's initial value.
    let witness = state(&p.space, &[vec![1, 0, 0], vec![0, 0, 0]], &[(0, 1)]);
    assert!(vc.replays(&p.space, &witness));
    assert!(vc.lhs.accepts(&witness) && !vc.rhs.accepts(&witness));
}

#[test]
fn mutants_are_caught() {
    for (text, kind) in [(WEAK, VcKind::Exit), (FORGETFUL, VcKind::Preservation)] {
        let p = parse_dpl(text).unwrap();
        let report = check(&p, CheckOptions::new(3)).unwrap();
        let found: Vec<_> = report.violations().collect();
        assert!(found.iter().any(|(vc, _)| vc.kind == kind), "{}", p.name);
        for (vc, g) in found {
            assert!(vc.replays(&p.space, g));
            assert!(vc.lhs.accepts(g) && !vc.rhs.accepts(g));
        }
    }
}

#[test]
fn violations_persist_with_larger_caps() {
    let p = parse_dpl(FORGETFUL).unwrap();
    let small = check(&p, CheckOptions::new(1)).unwrap();
    let large = check(&p, CheckOptions { jobs: 2, ..CheckOptions::new(3) }).unwrap();
    for (vc, g) in small.violations() {
        let same = large.results.iter().find(|r| r.vc.kind == vc.kind && r.vc.line == vc.line).unwrap();
        assert!(matches!(same.verdict, Inclusion::Violation(_)));
        assert!(same.vc.lhs.accepts(g) && !same.vc.rhs.accepts(g));
    }
}

#[test]
fn report_lines() {
    let p = parse_dpl(FORGETFUL).unwrap();
    let text = check(&p, CheckOptions::new(2)).unwrap().to_string();
    let heads: Vec<&str> = text.lines().filter(|l| l.starts_with("VC ")).collect();
    assert_eq!(heads.len(), 3);
    assert!(heads[0].starts_with("VC entry line") && heads[0].ends_with("HOLDS exact=false"));
    assert!(heads[1].starts_with("VC preservation line") && heads[1].ends_with("VIOLATION"));
    assert!(text.contains("labels m="));
}
