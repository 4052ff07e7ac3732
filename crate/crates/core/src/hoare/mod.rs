//! Assertions over global states, their compilation to deterministic
//! automata, and proof checking by reduction to language inclusion.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{contains, Adga, AdgaBuilder, BoolExpr, Kind};
use crate::constructions::{complement, product, Combine};
use crate::decision::{inclusion_ddga, DecisionError, Inclusion};
use crate::dpl::{
    eval_bexpr, parse::write_bexpr, step_round, wp_round, BExpr, DplError, Frame, GlobalCmd, LocalBlock, Program,
    StateSpace,
};
use crate::graph::{write_graph, Alphabet, Alphabets, EnumMode, EnumOptions, LabeledGraph};

/// A Boolean combination of node and edge atoms.
///
/// Predicates of `All` and `Some` talk about one node (`Side::Own`).
/// `AllEdges` predicates relate the sender of an edge (`Side::Other`) to its
/// receiver (`Side::Own`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Const(bool),
    All(BExpr),
    Some(BExpr),
    AllEdges(BExpr),
    Not(Box<Assertion>),
    And(Vec<Assertion>),
    Or(Vec<Assertion>),
}

impl Assertion {
    pub fn and(items: impl IntoIterator<Item = Assertion>) -> Assertion {
        Assertion::And(items.into_iter().collect())
    }

    pub fn negate(self) -> Assertion {
        Assertion::Not(Box::new(self))
    }

    /// Renders with the variable names of `space`.
    pub fn display<'a>(&'a self, space: &'a StateSpace) -> impl fmt::Display + 'a {
        DisplayAssertion { a: self, space }
    }
}

struct DisplayAssertion<'a> {
    a: &'a Assertion,
    space: &'a StateSpace,
}

fn write_assertion(out: &mut String, space: &StateSpace, a: &Assertion) {
    match a {
        Assertion::Const(c) => out.push_str(if *c { "true" } else { "false" }),
        Assertion::All(p) | Assertion::Some(p) => {
            out.push_str(if matches!(a, Assertion::All(_)) { "(all v: " } else { "(some v: " });
            write_bexpr(out, space, p);
            out.push(')');
        }
        Assertion::AllEdges(p) => {
            out.push_str("(alledges u v: ");
            write_bexpr(out, space, p);
            out.push(')');
        }
        Assertion::Not(x) => {
            out.push_str("not ");
            write_assertion(out, space, x);
        }
        Assertion::And(xs) | Assertion::Or(xs) => {
            let sep = if matches!(a, Assertion::And(_)) { " and " } else { " or " };
            out.push('(');
            if xs.is_empty() {
                out.push_str(if matches!(a, Assertion::And(_)) { "true" } else { "false" });
            }
            for (k, x) in xs.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                write_assertion(out, space, x);
            }
            out.push(')');
        }
    }
}

impl fmt::Display for DisplayAssertion<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_assertion(&mut s, self.space, self.a);
        f.write_str(&s)
    }
}

/// Evaluates an assertion directly on a global state.
pub fn holds(a: &Assertion, space: &StateSpace, g: &LabeledGraph) -> bool {
    let vals = space.valuations_of(g);
    holds_on(a, space, g, &vals)
}

fn holds_on(a: &Assertion, space: &StateSpace, g: &LabeledGraph, vals: &[Vec<u32>]) -> bool {
    let dom = &space.domain;
    match a {
        Assertion::Const(c) => *c,
        Assertion::All(p) => vals.iter().all(|v| eval_bexpr(p, dom, Frame::local(v, None))),
        Assertion::Some(p) => vals.iter().any(|v| eval_bexpr(p, dom, Frame::local(v, None))),
        Assertion::AllEdges(p) => g.graph.all_edges().all(|(_, u, v)| {
            eval_bexpr(p, dom, Frame { own: &vals[v], other: Some(&vals[u]), messages: None })
        }),
        Assertion::Not(x) => !holds_on(x, space, g, vals),
        Assertion::And(xs) => xs.iter().all(|x| holds_on(x, space, g, vals)),
        Assertion::Or(xs) => xs.iter().any(|x| holds_on(x, space, g, vals)),
    }
}

/// A deterministic automaton over the valuation alphabet accepting exactly
/// the global states satisfying `a`.
pub fn compile_assertion(a: &Assertion, space: &StateSpace, edges: &Alphabet) -> Adga {
    let alphabets = Alphabets::new(space.alphabet(), edges.clone());
    let dom = &space.domain;
    let count = space.valuation_count();
    match a {
        Assertion::Const(c) => {
            let mut b = AdgaBuilder::new(alphabets);
            let p = b.state(if *c { "yes" } else { "no" }, Kind::Permanent);
            for i in 0..count {
                b.init(i, p);
            }
            b.accept(if *c { BoolExpr::t() } else { BoolExpr::f() });
            b.build().expect("constant automaton is valid")
        }
        Assertion::All(p) | Assertion::Some(p) => {
            let mut b = AdgaBuilder::new(alphabets);
            let yes = b.state("yes", Kind::Permanent);
            let no = b.state("no", Kind::Permanent);
            for i in 0..count {
                let ok = eval_bexpr(p, dom, Frame::local(&space.valuation(i), None));
                b.init(i, if ok { yes } else { no });
            }
            b.accept(if matches!(a, Assertion::All(_)) {
                BoolExpr::not(BoolExpr::atom(no))
            } else {
                BoolExpr::atom(yes)
            });
            crate::automaton::trim(&b.build().expect("node atom automaton is valid"))
        }
        Assertion::AllEdges(p) => {
            let mut b = AdgaBuilder::new(alphabets);
            let vals: Vec<Vec<u32>> = (0..count).map(|i| space.valuation(i)).collect();
            let states: Vec<_> = (0..count).map(|i| b.state(space.symbol(i), Kind::Existential)).collect();
            let yes = b.state("yes", Kind::Permanent);
            let no = b.state("no", Kind::Permanent);
            for (i, &q) in states.iter().enumerate() {
                b.init(i, q);
                let bad: Vec<BoolExpr<_>> = (0..count)
                    .filter(|&s| !eval_bexpr(p, dom, Frame { own: &vals[i], other: Some(&vals[s]), messages: None }))
                    .flat_map(|s| (0..edges.len()).map(move |gamma| (gamma, s)))
                    .map(|(gamma, s)| contains(gamma, states[s]))
                    .collect();
                if bad.is_empty() {
                    b.rule(q, BoolExpr::t(), [yes]);
                } else {
                    let heard_bad = BoolExpr::or(bad);
                    b.rule(q, BoolExpr::not(heard_bad.clone()), [yes]);
                    b.rule(q, heard_bad, [no]);
                }
            }
            b.accept(BoolExpr::not(BoolExpr::atom(no)));
            crate::automaton::trim(&b.build().expect("edge atom automaton is valid"))
        }
        Assertion::Not(x) => complement(&compile_assertion(x, space, edges)),
        Assertion::And(xs) | Assertion::Or(xs) => {
            let combine = if matches!(a, Assertion::And(_)) { Combine::And } else { Combine::Or };
            let mut parts = xs.iter().map(|x| compile_assertion(x, space, edges));
            let Some(first) = parts.next() else {
                return compile_assertion(&Assertion::Const(combine == Combine::And), space, edges);
            };
            parts.fold(first, |acc, x| {
                product(&acc, &x, combine).expect("compiled assertions are deterministic over one alphabet")
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoareError {
    #[error("line {0}: loop without an invariant")]
    MissingInvariant(usize),
    #[error(transparent)]
    Dpl(#[from] DplError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VcKind {
    Entry,
    Weaken,
    Preservation,
    Exit,
}

impl fmt::Display for VcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VcKind::Entry => "entry",
            VcKind::Weaken => "weaken",
            VcKind::Preservation => "preservation",
            VcKind::Exit => "exit",
        })
    }
}

/// `L(lhs) ⊆ L(rhs)` on connected undirected graphs.
///
/// `rhs` recognizes the states from which running `rounds` leads into
/// `target`, so a violation can be replayed with the interpreter.
#[derive(Debug, Clone)]
pub struct Vc {
    pub kind: VcKind,
    pub line: usize,
    pub lhs: Adga,
    pub rhs: Adga,
    pub assumption: Assertion,
    pub rounds: Vec<LocalBlock>,
    pub target: Assertion,
}

impl Vc {
    /// Whether `g` satisfies the assumption but misses the target after the rounds.
    pub fn replays(&self, space: &StateSpace, g: &LabeledGraph) -> bool {
        if !holds(&self.assumption, space, g) {
            return false;
        }
        let after = self.rounds.iter().fold(g.clone(), |g, k| step_round(k, space, &g));
        !holds(&self.target, space, &after)
    }
}

/// The edge alphabet used for programs: a single blank relation.
pub fn program_edges() -> Alphabet {
    Alphabet::blank()
}

struct Gen<'a> {
    space: &'a StateSpace,
    edges: Alphabet,
    vcs: Vec<Vc>,
}

/// What is required after a point of the program.
struct Required {
    automaton: Adga,
    rounds: Vec<LocalBlock>,
    target: Assertion,
}

impl Gen<'_> {
    fn compile(&self, a: &Assertion) -> Adga {
        compile_assertion(a, self.space, &self.edges)
    }

    fn emit(&mut self, kind: VcKind, line: usize, assumption: Assertion, r: &Required) {
        self.vcs.push(Vc {
            kind,
            line,
            lhs: self.compile(&assumption),
            rhs: r.automaton.clone(),
            assumption,
            rounds: r.rounds.clone(),
            target: r.target.clone(),
        });
    }

    fn assertion_point(&self, a: &Assertion) -> Required {
        Required { automaton: self.compile(a), rounds: Vec::new(), target: a.clone() }
    }

    fn backward(&mut self, cmds: &[GlobalCmd], mut r: Required) -> Result<Required, HoareError> {
        for c in cmds.iter().rev() {
            match c {
                GlobalCmd::Each { block, .. } => {
                    r.automaton = wp_round(block, self.space, &r.automaton)?;
                    r.rounds.insert(0, block.clone());
                }
                GlobalCmd::Assert { assertion, line } => {
                    self.emit(VcKind::Weaken, *line, assertion.clone(), &r);
                    r = self.assertion_point(assertion);
                }
                GlobalCmd::While { cond, invariant, body, line } => {
                    let theta = invariant.as_ref().ok_or(HoareError::MissingInvariant(*line))?;
                    self.emit(VcKind::Exit, *line, Assertion::and([theta.clone(), cond.clone().negate()]), &r);
                    let inner = self.backward(body, self.assertion_point(theta))?;
                    self.emit(VcKind::Preservation, *line, Assertion::and([theta.clone(), cond.clone()]), &inner);
                    r = self.assertion_point(theta);
                }
            }
        }
        Ok(r)
    }
}

/// Verification conditions of a program, in program order.
pub fn vcgen(p: &Program) -> Result<Vec<Vc>, HoareError> {
    let mut gen = Gen { space: &p.space, edges: program_edges(), vcs: Vec::new() };
    let post = p.ensure.as_ref().map_or(Assertion::Const(true), |(a, _)| a.clone());
    let r = gen.backward(&p.body, gen.assertion_point(&post))?;
    let (pre, line) = p.require.clone().unwrap_or((Assertion::Const(true), 0));
    gen.emit(VcKind::Entry, line, pre, &r);
    let mut vcs = gen.vcs;
    vcs.sort_by_key(|vc| (vc.line, vc.kind));
    Ok(vcs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub n_cap: usize,
    pub self_loops: bool,
    /// Worker threads for discharging conditions in parallel.
    pub jobs: usize,
}

impl CheckOptions {
    pub fn new(n_cap: usize) -> Self {
        CheckOptions { n_cap, self_loops: true, jobs: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct VcResult {
    pub vc: Vc,
    pub verdict: Inclusion,
}

#[derive(Debug, Clone)]
pub struct VcReport {
    pub space: StateSpace,
    pub results: Vec<VcResult>,
}

impl VcReport {
    /// Every condition holds up to the cap.
    pub fn verified(&self) -> bool {
        self.results.iter().all(|r| matches!(r.verdict, Inclusion::Holds { .. }))
    }

    /// Every condition holds and every search reached its size bound.
    pub fn exact(&self) -> bool {
        self.results.iter().all(|r| matches!(r.verdict, Inclusion::Holds { exact: true, .. }))
    }

    pub fn violations(&self) -> impl Iterator<Item = (&Vc, &LabeledGraph)> {
        self.results.iter().filter_map(|r| match &r.verdict {
            Inclusion::Violation(g) => Some((&r.vc, g)),
            Inclusion::Holds { .. } => None,
        })
    }
}

impl fmt::Display for VcReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabets = Alphabets::new(self.space.alphabet(), program_edges());
        for r in &self.results {
            let vc = &r.vc;
            match &r.verdict {
                Inclusion::Holds { exact, .. } => writeln!(f, "VC {} line{}: HOLDS exact={exact}", vc.kind, vc.line)?,
                Inclusion::Violation(g) => {
                    writeln!(f, "VC {} line{}: VIOLATION", vc.kind, vc.line)?;
                    writeln!(f, "# satisfies: {}", vc.assumption.display(&self.space))?;
                    let mut fails = String::new();
                    if !vc.rounds.is_empty() {
                        let _ = write!(fails, "after {} round(s), ", vc.rounds.len());
                    }
                    writeln!(f, "# {fails}fails: {}", vc.target.display(&self.space))?;
                    f.write_str(&write_graph(g, &alphabets))?;
                }
            }
        }
        Ok(())
    }
}

fn discharge(vc: &Vc, opts: CheckOptions) -> Result<Inclusion, HoareError> {
    let enum_opts = EnumOptions::new(EnumMode::ConnectedUndirected).self_loops(opts.self_loops);
    Ok(inclusion_ddga(&vc.lhs, &vc.rhs, enum_opts, opts.n_cap)?)
}

/// Discharges every verification condition by bounded inclusion checking
/// on connected undirected graphs.
pub fn check(p: &Program, opts: CheckOptions) -> Result<VcReport, HoareError> {
    let vcs = vcgen(p)?;
    let verdicts: Vec<Result<Inclusion, HoareError>> = if opts.jobs <= 1 || vcs.len() <= 1 {
        vcs.iter().map(|vc| discharge(vc, opts)).collect()
    } else {
        let jobs = opts.jobs.min(vcs.len());
        let mut slots: Vec<Option<Result<Inclusion, HoareError>>> = vec![None; vcs.len()];
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    let vcs = &vcs;
                    s.spawn(move || {
                        (w..vcs.len()).step_by(jobs).map(|i| (i, discharge(&vcs[i], opts))).collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, v) in h.join().expect("worker panicked") {
                    slots[i] = Some(v);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every condition discharged")).collect()
    };
    let mut results = Vec::new();
    for (vc, verdict) in vcs.into_iter().zip(verdicts) {
        results.push(VcResult { vc, verdict: verdict? });
    }
    Ok(VcReport { space: p.space.clone(), results })
}
