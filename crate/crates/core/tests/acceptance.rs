//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so
//! the lines always reach the test output.

mod common;

use std::time::Instant;

use common::*;
use dga::automaton::builtin;
use dga::automaton::{witness_run, Class, Kind};
use dga::constructions::complement;
use dga::decision::{emptiness_bound, find_member, Bound, Inclusion, SearchOutcome};
use dga::dpl::{parse_dpl, run_program, step_round, wp_round, GlobalCmd, LocalBlock, Program};
use dga::graph::{enumerate_graphs, is_k_colorable, shapes, Alphabets, EnumMode, EnumOptions, LabeledGraph};
use dga::hoare::{check, compile_assertion, program_edges, CheckOptions, VcKind};
use dga::mso::{compile_mso, eval_mso, mso_of_adga, parse_mso, Assignment};
use num_bigint::BigUint;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_color3_fidelity() -> Verdict {
    let a = builtin::color3();
    let graphs: Vec<LabeledGraph> = corpus(&Alphabets::blank(), 4);
    for g in &graphs {
        ensure(a.accepts(g) == is_k_colorable(&g.graph, 3), || format!("disagrees on {g:?}"))?;
    }
    let raw = enumerate_graphs(1, 1, 3, EnumOptions::new(EnumMode::AllDirected).dedup(false))
        .filter(|g| g.node_count() == 3)
        .collect::<Vec<_>>();
    ensure(raw.len() == 512, || format!("{} raw 3-node graphs", raw.len()))?;
    for g in &raw {
        ensure(a.accepts(g) == is_k_colorable(&g.graph, 3), || format!("disagrees on {g:?}"))?;
    }
    Ok(format!("{} graphs up to isomorphism with n <= 4, 512 raw graphs with n = 3", graphs.len()))
}

fn c2_complement() -> Verdict {
    let mut checked = 0;
    for (name, a) in registry() {
        let c = complement(&a);
        for g in corpus(a.alphabets(), 3) {
            ensure(c.accepts(&g) != a.accepts(&g), || format!("{name} on {g:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (automaton, graph) pairs"))
}

fn c3_centric_replay() -> Verdict {
    let a = builtin::centric();
    let g = builtin::centric_graph();
    ensure(a.accepts(&g), || "graph rejected".into())?;
    let run = witness_run(&a, &g).map_err(|e| e.to_string())?.ok_or("no accepting run")?;
    let universal: Vec<usize> = (0..run.configs.len()).filter(|&i| run.kinds[i] == Kind::Universal).collect();
    ensure(universal.len() == 1, || format!("{} universal configurations", universal.len()))?;
    let split = universal[0];
    ensure(run.edges[split].len() == 2, || format!("{}-way split", run.edges[split].len()))?;
    let round = run.depth_of(split) + 1;
    ensure(round == 2, || format!("split in round {round}"))?;
    let leaves = run.leaves();
    ensure(leaves.len() == 2, || format!("{} leaves", leaves.len()))?;
    ensure(leaves.iter().all(|&l| run.kinds[l] == Kind::Permanent), || "nonpermanent leaf".into())?;
    Ok(format!("{} configurations, universal split in round 2, 2 permanent leaves", run.configs.len()))
}

fn c4_mso_to_automata() -> Verdict {
    let mut graphs = 0;
    for (src, n) in MSO_SUITE.iter().map(|s| (*s, 3)).chain([(COLOR3, 2)]) {
        let phi = parse_mso(src).map_err(|e| e.to_string())?;
        ensure(src == COLOR3 || phi.formula.quantifier_depth() <= 3, || format!("depth of {src}"))?;
        let a = compile_mso(&phi).map_err(|e| e.to_string())?;
        for g in corpus(&phi.alphabets, n) {
            let expected = eval_mso(&phi, &g, &Assignment::new()).map_err(|e| e.to_string())?;
            ensure(a.accepts(&g) == expected, || format!("`{src}` on {g:?}"))?;
            graphs += 1;
        }
    }
    Ok(format!("{} sentences, {graphs} evaluations", MSO_SUITE.len() + 1))
}

fn c5_automata_to_mso() -> Verdict {
    let mut graphs = 0;
    for a in [builtin::color3(), builtin::order_le(1), builtin::trivial(true)] {
        let phi = mso_of_adga(&a);
        for g in corpus(a.alphabets(), 3) {
            let holds = eval_mso(&phi, &g, &Assignment::new()).map_err(|e| e.to_string())?;
            ensure(holds == a.accepts(&g), || format!("encoding disagrees on {g:?}"))?;
            graphs += 1;
        }
    }
    ensure(builtin::trivial(true).length() == 0, || "trivial automaton has positive length".into())?;
    Ok(format!("{graphs} evaluations"))
}

fn c6_separation() -> Verdict {
    let le2 = builtin::order_le(2);
    for g in corpus(&Alphabets::blank(), 4) {
        ensure(le2.accepts(&g) == (g.node_count() <= 2), || format!("order_le(2) on {g:?}"))?;
    }
    let mut pairs = 0;
    for (name, a) in registry() {
        let class = a.class();
        if class == Class::Adga {
            continue;
        }
        for g in corpus(a.alphabets(), 3) {
            let before = a.accepts(&g);
            for v in 0..g.node_count() {
                let after = a.accepts(&g.duplicate_node(v));
                if class == Class::Ddga {
                    ensure(before == after, || format!("{name}: duplication changed the verdict on {g:?}"))?;
                } else {
                    ensure(!before || after, || format!("{name}: duplication lost acceptance on {g:?}"))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("order_le(2) exact on n <= 4, {pairs} duplications"))
}

fn c7_emptiness() -> Verdict {
    let value = |b: Bound| match b {
        Bound::Value(v) => Ok(v),
        Bound::Overflow => Err("overflow".to_string()),
    };
    let bound = |a: &dga::automaton::Adga, mode| value(emptiness_bound(a, mode).map_err(|e| e.to_string())?);
    // (automaton, mode, hand-computed value)
    let cases: [(dga::automaton::Adga, EnumMode, u64); 5] = [
        (chain(4), EnumMode::AllDirected, 4 * 4 * 4),
        (chain(3), EnumMode::AllDirected, 3 * 3),
        (builtin::trivial(true), EnumMode::AllDirected, 1),
        (chain(3), EnumMode::ConnectedUndirected, (3 * 8) * (3 * 8)),
        (builtin::trivial(true), EnumMode::ConnectedUndirected, 2),
    ];
    for (k, (a, mode, expected)) in cases.iter().enumerate() {
        let got = bound(a, *mode)?;
        ensure(got == BigUint::from(*expected), || format!("instance {k}: {got} != {expected}"))?;
    }
    match find_member(&builtin::order_ge(3), EnumMode::AllDirected, 5).map_err(|e| e.to_string())? {
        SearchOutcome::Counterexample(g) => ensure(g.node_count() == 3, || format!("{} nodes", g.node_count()))?,
        other => return Err(format!("order_ge(3): {other:?}")),
    }
    let empty = builtin::trivial(false);
    ensure(empty.state_count() == 1, || "the empty automaton has several states".into())?;
    let outcome = find_member(&empty, EnumMode::AllDirected, 5).map_err(|e| e.to_string())?;
    ensure(outcome == SearchOutcome::EmptyUpTo { n_checked: 1, exact: true }, || format!("{outcome:?}"))?;
    Ok("5 bounds, 3-node member, exact EmptyUpTo(1)".into())
}

fn c8_regularity() -> Verdict {
    let d = builtin::even_a_dfa();
    let a = builtin::word_dfa(&d);
    ensure(a.length() == 2 && a.class() == Class::Ndga, || "not a length-2 NDGA".into())?;
    let mut words = 0;
    for len in 1..=6 {
        for w in 0..1usize << len {
            let word: Vec<usize> = (0..len).map(|i| w >> i & 1).collect();
            ensure(a.accepts(&builtin::path_graph(&word)) == d.run(&word), || format!("{word:?}"))?;
            words += 1;
        }
    }
    ensure(words == 126, || format!("{words} words"))?;
    Ok("126 words".into())
}

const FLOODMAX: &str = include_str!("../../../data/floodmax.dpl");

fn floodmax_over(domain: &str) -> Result<Program, String> {
    parse_dpl(&FLOODMAX.replace("domain 0 1 2", &format!("domain {domain}"))).map_err(|e| e.to_string())
}

fn rounds(p: &Program) -> Vec<LocalBlock> {
    let mut out = Vec::new();
    for c in &p.body {
        match c {
            GlobalCmd::Each { block, .. } => out.push(block.clone()),
            GlobalCmd::While { body, .. } => {
                out.extend(body.iter().filter_map(|c| match c {
                    GlobalCmd::Each { block, .. } => Some(block.clone()),
                    _ => None,
                }));
            }
            GlobalCmd::Assert { .. } => {}
        }
    }
    out
}

fn c9_wp_identity() -> Verdict {
    let p = floodmax_over("0 1")?;
    let GlobalCmd::While { cond, invariant, .. } = &p.body[1] else { return Err("no loop".into()) };
    let assertions = [
        p.require.clone().ok_or("no precondition")?.0,
        invariant.clone().ok_or("no invariant")?,
        p.ensure.clone().ok_or("no postcondition")?.0,
        cond.clone(),
    ];
    let graphs = connected_corpus(&p.space.alphabets(), 3);
    let mut checks = 0;
    for k in rounds(&p) {
        for a in &assertions {
            let automaton = compile_assertion(a, &p.space, &program_edges());
            let wp = wp_round(&k, &p.space, &automaton).map_err(|e| e.to_string())?;
            ensure(wp.class() == Class::Ddga, || "wp is not deterministic".into())?;
            for g in &graphs {
                let after = step_round(&k, &p.space, g);
                ensure(wp.accepts(g) == automaton.accepts(&after), || format!("{g:?}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} checks"))
}

fn c10_verification() -> Verdict {
    let mut notes = Vec::new();
    let mut problems = Vec::new();
    let p = floodmax_over("0 1 2")?;
    let report = check(&p, CheckOptions::new(4)).map_err(|e| e.to_string())?;
    let kinds: Vec<VcKind> = report.results.iter().map(|r| r.vc.kind).collect();
    if kinds != [VcKind::Entry, VcKind::Preservation, VcKind::Exit] {
        problems.push(format!("conditions {kinds:?}"));
    }
    for r in &report.results {
        match &r.verdict {
            Inclusion::Holds { n_checked, exact } => {
                notes.push(format!("{} holds to n={n_checked} exact={exact}", r.vc.kind))
            }
            Inclusion::Violation(g) => {
                let replay = r.vc.replays(&p.space, g);
                problems.push(format!(
                    "{} violated on {} nodes (replays={replay})",
                    r.vc.kind,
                    g.node_count()
                ));
            }
        }
    }
    for (file, kind) in [
        (include_str!("../../../data/floodmax_weak_invariant.dpl"), VcKind::Exit),
        (include_str!("../../../data/floodmax_forgetful.dpl"), VcKind::Preservation),
    ] {
        let m = parse_dpl(file).map_err(|e| e.to_string())?;
        let report = check(&m, CheckOptions::new(4)).map_err(|e| e.to_string())?;
        let hit = report.violations().find(|(vc, _)| vc.kind == kind);
        match hit {
            Some((vc, g)) if vc.replays(&m.space, g) => {
                notes.push(format!("{}: {kind} violation replays", m.name))
            }
            Some(_) => problems.push(format!("{}: violation does not replay", m.name)),
            None => problems.push(format!("{}: no {kind} violation", m.name)),
        }
    }
    if problems.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", problems.join("; "), notes.join("; ")))
    }
}

fn c11_simulation() -> Verdict {
    let p = floodmax_over("0 1 2 3 4 5 6 7")?;
    let opts = EnumOptions::new(EnumMode::ConnectedUndirected);
    let mut runner = TestRunner::deterministic();
    let mut runs = 0;
    for n in 1..=5 {
        for shape in shapes(n, 1, opts) {
            for _ in 0..100 {
                let tree = (proptest::collection::vec(0u32..8, n), proptest::collection::vec(0u32..8, n))
                    .new_tree(&mut runner)
                    .map_err(|e| e.to_string())?;
                let (m, old) = tree.current();
                let vals: Vec<Vec<u32>> = (0..n).map(|v| vec![m[v], old[v], m[v]]).collect();
                let g = p.space.label_graph(shape.clone(), &vals);
                let out = run_program(&p, &g, 4 * n + 4).map_err(|e| format!("{e} on {g:?}"))?;
                let max = *m.iter().max().expect("nonempty");
                let finals = p.space.valuations_of(&out);
                ensure(finals.iter().all(|v| v[0] == max && v[1] == max), || format!("{g:?} ended as {finals:?}"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs"))
}

/// Criteria that fail for a reason recorded in the decisions ledger.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    10,
    "the published loop invariant is not inductive: a 2-node state satisfying it \
     loses the retained-value conjunct after one round",
)];

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("color3 agrees with 3-colorability", c1_color3_fidelity),
        ("complement negates every registry automaton", c2_complement),
        ("centric run on the example graph", c3_centric_replay),
        ("compiled MSO sentences agree with evaluation", c4_mso_to_automata),
        ("MSO encodings agree with the automata", c5_automata_to_mso),
        ("separation witnesses and duplication", c6_separation),
        ("emptiness bounds and minimal members", c7_emptiness),
        ("word automaton on path-encoded words", c8_regularity),
        ("weakest-precondition identity", c9_wp_identity),
        ("FloodMax verification and mutants", c10_verification),
        ("FloodMax simulation reaches the maximum", c11_simulation),
    ];
    let mut unexpected = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = k + 1;
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                let known = KNOWN_FAILURES.iter().find(|(i, _)| *i == id);
                println!("FAIL {id:>2} {name} ({detail}) [{secs:.1}s]");
                match known {
                    Some((_, why)) => println!("     known: {why}"),
                    None => unexpected += 1,
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
