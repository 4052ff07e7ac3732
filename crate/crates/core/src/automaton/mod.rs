//! Alternating distributed graph automata.
//!
//! An automaton runs synchronously on a labeled graph: every node starts in
//! `σ(label)` and in each round moves to a state chosen from the rules of its
//! current state, whose guards inspect the set of states received from
//! incoming neighbours (one set per edge symbol). Levels order the rounds;
//! permanent states sit on the top level and loop forever.

pub mod bdd;
pub mod builtin;
mod eval;
pub mod expr;
pub mod format;
mod sync;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::graph::Alphabets;

pub use eval::{accepts, global_successors, is_deterministic_on, witness_run, Evaluator, RunDag};
pub use expr::BoolExpr;
pub use sync::{synchronize, trim};

pub type StateId = usize;

/// Guard atom `(γ, q)`: state `q` was received through some γ-edge.
pub type Guard = BoolExpr<(usize, StateId)>;

/// Acceptance condition over occurrence atoms "permanent state `p` occurs".
pub type AcceptCondition = BoolExpr<StateId>;

pub fn contains(gamma: usize, q: StateId) -> Guard {
    BoolExpr::Atom((gamma, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Existential,
    Universal,
    Permanent,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::Existential => 'E',
            Kind::Universal => 'A',
            Kind::Permanent => 'P',
        }
    }

    pub fn dual(self) -> Kind {
        match self {
            Kind::Existential => Kind::Universal,
            Kind::Universal => Kind::Existential,
            Kind::Permanent => Kind::Permanent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Adga,
    Ndga,
    Ddga,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Adga => "ADGA",
            Class::Ndga => "NDGA",
            Class::Ddga => "DDGA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDecl {
    pub name: String,
    pub kind: Kind,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub source: StateId,
    pub guard: Guard,
    /// Sorted, without duplicates.
    pub targets: Vec<StateId>,
}

/// One violated well-formedness condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPermanentStates,
    DuplicateState(String),
    MissingInit(String),
    InitIntoInterior { label: String, state: String, level: usize },
    RuleFromPermanent(String),
    EmptyTargets(String),
    BadReference(String),
    LevelConflict { state: String, levels: (usize, usize) },
    Cycle(String),
    MixedKindLevel(usize),
    MixedTargets(String),
    NonPermanentAccepting(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPermanentStates => write!(f, "no permanent states"),
            Violation::DuplicateState(s) => write!(f, "state `{s}` declared twice"),
            Violation::MissingInit(a) => write!(f, "no initial state for label `{a}`"),
            Violation::InitIntoInterior { label, state, level } => write!(
                f,
                "label `{label}` starts in `{state}` at level {level}; initial states must be on level 0 or permanent"
            ),
            Violation::RuleFromPermanent(s) => write!(f, "rule from permanent state `{s}`"),
            Violation::EmptyTargets(s) => write!(f, "rule from `{s}` has no targets"),
            Violation::BadReference(s) => write!(f, "{s}"),
            Violation::LevelConflict { state, levels } => write!(
                f,
                "state `{state}` is reachable at levels {} and {}",
                levels.0, levels.1
            ),
            Violation::Cycle(s) => write!(f, "state `{s}` lies on or behind a cycle of nonpermanent states"),
            Violation::MixedKindLevel(l) => write!(f, "level {l} mixes existential and universal states"),
            Violation::MixedTargets(s) => write!(f, "a rule from `{s}` has targets on different levels or kinds"),
            Violation::NonPermanentAccepting(s) => write!(f, "accepting condition mentions nonpermanent state `{s}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct InvalidAutomaton(pub Vec<Violation>);

impl fmt::Display for InvalidAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid automaton:")?;
        for v in &self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Incremental description of an automaton; `build` validates it.
#[derive(Debug, Clone)]
pub struct AdgaBuilder {
    alphabets: Alphabets,
    states: Vec<(String, Kind)>,
    names: HashMap<String, StateId>,
    duplicates: Vec<String>,
    init: Vec<Option<StateId>>,
    rules: Vec<Rule>,
    accepting: AcceptCondition,
}

impl AdgaBuilder {
    pub fn new(alphabets: Alphabets) -> Self {
        let labels = alphabets.nodes.len();
        AdgaBuilder {
            alphabets,
            states: Vec::new(),
            names: HashMap::new(),
            duplicates: Vec::new(),
            init: vec![None; labels],
            rules: Vec::new(),
            accepting: BoolExpr::f(),
        }
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    /// Declares a state; a clashing name is recorded as a violation.
    pub fn declare(&mut self, name: impl Into<String>, kind: Kind) -> StateId {
        let name = name.into();
        let id = self.states.len();
        if self.names.insert(name.clone(), id).is_some() {
            self.duplicates.push(name.clone());
        }
        self.states.push((name, kind));
        id
    }

    /// Declares a state, disambiguating the name if it is already taken.
    pub fn state(&mut self, name: impl Into<String>, kind: Kind) -> StateId {
        let base = sanitize(&name.into());
        let mut name = base.clone();
        let mut k = 1;
        while self.names.contains_key(&name) {
            k += 1;
            name = format!("{base}~{k}");
        }
        self.declare(name, kind)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.get(name).copied()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn kind(&self, q: StateId) -> Kind {
        self.states[q].1
    }

    pub fn init(&mut self, label: usize, q: StateId) {
        self.init[label] = Some(q);
    }

    pub fn rule(&mut self, source: StateId, guard: Guard, targets: impl IntoIterator<Item = StateId>) {
        let targets: BTreeSet<StateId> = targets.into_iter().collect();
        self.rules.push(Rule {
            source,
            guard,
            targets: targets.into_iter().collect(),
        });
    }

    pub fn accepting_condition(&self) -> &AcceptCondition {
        &self.accepting
    }

    pub fn accept(&mut self, cond: AcceptCondition) {
        self.accepting = cond;
    }

    /// Adds one explicit accepting set, OR-ed onto the current condition.
    pub fn accept_set(&mut self, set: &[StateId]) {
        let perm: Vec<StateId> = (0..self.states.len())
            .filter(|&q| self.states[q].1 == Kind::Permanent)
            .collect();
        let term = exact_set(set, &perm);
        let cur = std::mem::replace(&mut self.accepting, BoolExpr::f());
        self.accepting = BoolExpr::or([cur, term]);
    }

    pub fn build(self) -> Result<Adga, InvalidAutomaton> {
        validate(self)
    }
}

/// Condition "the occurrence set equals `set`" relative to the permanent states `perm`.
pub fn exact_set(set: &[StateId], perm: &[StateId]) -> AcceptCondition {
    BoolExpr::and(perm.iter().map(|&p| {
        if set.contains(&p) {
            BoolExpr::atom(p)
        } else {
            BoolExpr::not(BoolExpr::atom(p))
        }
    }))
}

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_whitespace() || "(){}!&|#".contains(c) {
                '_'
            } else {
                c
            }
        })
        .collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

/// A validated automaton with its level map.
#[derive(Debug, Clone)]
pub struct Adga {
    alphabets: Alphabets,
    states: Vec<StateDecl>,
    init: Vec<StateId>,
    rules: Vec<Rule>,
    by_source: Vec<Vec<usize>>,
    accepting: AcceptCondition,
    length: usize,
    warnings: Vec<String>,
}

fn validate(b: AdgaBuilder) -> Result<Adga, InvalidAutomaton> {
    let mut errs = Vec::new();
    let n = b.states.len();
    let gammas = b.alphabets.edges.len();
    let name = |q: StateId| b.states[q].0.clone();
    let kind = |q: StateId| b.states[q].1;

    errs.extend(b.duplicates.iter().cloned().map(Violation::DuplicateState));
    if !b.states.iter().any(|s| s.1 == Kind::Permanent) {
        errs.push(Violation::NoPermanentStates);
    }
    for (a, q) in b.init.iter().enumerate() {
        match q {
            None => errs.push(Violation::MissingInit(b.alphabets.nodes.symbol(a).to_string())),
            Some(q) if *q >= n => errs.push(Violation::BadReference(format!("initial state {q} out of range"))),
            _ => {}
        }
    }
    let mut refs_ok = true;
    for r in &b.rules {
        if r.source >= n || r.targets.iter().any(|&t| t >= n) {
            errs.push(Violation::BadReference("rule references an undeclared state".into()));
            refs_ok = false;
            continue;
        }
        let mut bad_atom = false;
        r.guard.for_each_atom(&mut |&(g, q)| bad_atom |= g >= gammas || q >= n);
        if bad_atom {
            errs.push(Violation::BadReference(format!(
                "guard of a rule from `{}` references an undeclared state or edge symbol",
                name(r.source)
            )));
        }
        if kind(r.source) == Kind::Permanent {
            errs.push(Violation::RuleFromPermanent(name(r.source)));
        }
        if r.targets.is_empty() {
            errs.push(Violation::EmptyTargets(name(r.source)));
        }
    }
    let mut bad_accept = BTreeSet::new();
    b.accepting.for_each_atom(&mut |&p| {
        if p >= n || kind(p) != Kind::Permanent {
            bad_accept.insert(p);
        }
    });
    for p in bad_accept {
        errs.push(if p < n {
            Violation::NonPermanentAccepting(name(p))
        } else {
            Violation::BadReference(format!("accepting condition references state {p}"))
        });
    }
    if !refs_ok || !errs.is_empty() {
        return Err(InvalidAutomaton(errs));
    }

    // Levels of nonpermanent states: longest-path layering over the rule
    // graph, which must be acyclic and consistent.
    let nonperm = |q: StateId| kind(q) != Kind::Permanent;
    let mut succ: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); n];
    let mut indeg = vec![0usize; n];
    for r in &b.rules {
        for &t in &r.targets {
            if nonperm(t) && succ[r.source].insert(t) {
                indeg[t] += 1;
            }
        }
    }
    let mut level: Vec<Option<usize>> = vec![None; n];
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for q in 0..n {
        if nonperm(q) && indeg[q] == 0 {
            level[q] = Some(0);
            queue.push_back(q);
        }
    }
    let mut conflicts = BTreeSet::new();
    while let Some(q) = queue.pop_front() {
        let lq = level[q].expect("queued states have levels");
        for &t in &succ[q] {
            match level[t] {
                None => level[t] = Some(lq + 1),
                Some(lt) if lt != lq + 1 => {
                    if conflicts.insert(t) {
                        errs.push(Violation::LevelConflict {
                            state: name(t),
                            levels: (lt.min(lq + 1), lt.max(lq + 1)),
                        });
                    }
                }
                _ => {}
            }
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    for q in 0..n {
        if nonperm(q) && indeg[q] > 0 {
            errs.push(Violation::Cycle(name(q)));
        }
    }
    if !errs.is_empty() {
        return Err(InvalidAutomaton(errs));
    }
    let max_level = (0..n).filter(|&q| nonperm(q)).filter_map(|q| level[q]).max();
    let perm_level = max_level.map_or(0, |m| m + 1);
    let levels: Vec<usize> = (0..n).map(|q| level[q].unwrap_or(perm_level)).collect();

    let mut level_kind: Vec<Option<Kind>> = vec![None; perm_level];
    let mut mixed = BTreeSet::new();
    for q in (0..n).filter(|&q| nonperm(q)) {
        let slot = &mut level_kind[levels[q]];
        match slot {
            None => *slot = Some(kind(q)),
            Some(k) if *k != kind(q) => {
                mixed.insert(levels[q]);
            }
            _ => {}
        }
    }
    errs.extend(mixed.into_iter().map(Violation::MixedKindLevel));
    for (a, q) in b.init.iter().enumerate() {
        let q = q.expect("checked above");
        if nonperm(q) && levels[q] != 0 {
            errs.push(Violation::InitIntoInterior {
                label: b.alphabets.nodes.symbol(a).to_string(),
                state: name(q),
                level: levels[q],
            });
        }
    }
    for r in &b.rules {
        let first = r.targets[0];
        if r.targets.iter().any(|&t| levels[t] != levels[first] || kind(t) != kind(first)) {
            errs.push(Violation::MixedTargets(name(r.source)));
        }
    }
    if !errs.is_empty() {
        return Err(InvalidAutomaton(errs));
    }

    let mut warnings = Vec::new();
    if b.accepting.eval(&|_| false) {
        warnings.push("the accepting condition admits the empty occurrence set, which no graph can reach".into());
    }
    let mut by_source = vec![Vec::new(); n];
    for (i, r) in b.rules.iter().enumerate() {
        by_source[r.source].push(i);
    }
    let states = b
        .states
        .into_iter()
        .zip(levels)
        .map(|((name, kind), level)| StateDecl { name, kind, level })
        .collect();
    Ok(Adga {
        alphabets: b.alphabets,
        states,
        init: b.init.into_iter().map(|q| q.expect("checked")).collect(),
        rules: b.rules,
        by_source,
        accepting: b.accepting,
        length: perm_level,
        warnings,
    })
}

impl Adga {
    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[StateDecl] {
        &self.states
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.states[q].name
    }

    pub fn kind(&self, q: StateId) -> Kind {
        self.states[q].kind
    }

    pub fn level(&self, q: StateId) -> usize {
        self.states[q].level
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn init(&self, label: usize) -> StateId {
        self.init[label]
    }

    pub fn inits(&self) -> &[StateId] {
        &self.init
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rules_from(&self, q: StateId) -> impl Iterator<Item = &Rule> + '_ {
        self.by_source[q].iter().map(move |&i| &self.rules[i])
    }

    pub fn accepting(&self) -> &AcceptCondition {
        &self.accepting
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Highest level; 0 when every state is permanent.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn permanent_states(&self) -> Vec<StateId> {
        (0..self.states.len()).filter(|&q| self.kind(q) == Kind::Permanent).collect()
    }

    pub fn states_at_level(&self, level: usize) -> Vec<StateId> {
        (0..self.states.len()).filter(|&q| self.level(q) == level).collect()
    }

    /// Kind shared by the states of a nonpermanent level, if the level is populated.
    pub fn level_kind(&self, level: usize) -> Option<Kind> {
        self.states
            .iter()
            .find(|s| s.level == level && s.kind != Kind::Permanent)
            .map(|s| s.kind)
    }

    pub fn accepts_set(&self, occurring: &[StateId]) -> bool {
        self.accepting.eval(&|p| occurring.contains(p))
    }

    /// All accepting occurrence sets, enumerated over subsets of Q_P.
    /// Only sensible for small Q_P.
    pub fn accepting_sets(&self) -> Vec<Vec<StateId>> {
        let perm = self.permanent_states();
        assert!(perm.len() < 24, "too many permanent states to enumerate");
        (0u32..1 << perm.len())
            .map(|m| {
                perm.iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect::<Vec<_>>()
            })
            .filter(|s| self.accepts_set(s))
            .collect()
    }

    /// δ(q, S), where `contains(γ, s)` answers whether `s ∈ S_γ`.
    pub fn local_successors_with(&self, q: StateId, received: &impl Fn(usize, StateId) -> bool) -> Vec<StateId> {
        if self.kind(q) == Kind::Permanent {
            return vec![q];
        }
        let mut out: Vec<StateId> = Vec::new();
        for r in self.rules_from(q) {
            if r.guard.eval(&|&(g, s)| received(g, s)) {
                out.extend(&r.targets);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// δ(q, S) with `received[γ]` the set S_γ.
    pub fn local_successors(&self, q: StateId, received: &[BTreeSet<StateId>]) -> Vec<StateId> {
        self.local_successors_with(q, &|g, s| received[g].contains(&s))
    }

    pub fn class(&self) -> Class {
        if self.states.iter().any(|s| s.kind == Kind::Universal) {
            Class::Adga
        } else if self.is_syntactically_deterministic() {
            Class::Ddga
        } else {
            Class::Ndga
        }
    }

    pub fn is_ndga(&self) -> bool {
        self.class() != Class::Adga
    }

    /// Every nonpermanent state has exactly one successor for every family of
    /// received sets, judged from the guards alone.
    pub fn is_syntactically_deterministic(&self) -> bool {
        (0..self.states.len())
            .filter(|&q| self.kind(q) != Kind::Permanent)
            .all(|q| self.state_is_deterministic(q))
    }

    /// Determinism restricted to the states of one level.
    pub fn level_is_deterministic(&self, level: usize) -> bool {
        self.states_at_level(level)
            .into_iter()
            .filter(|&q| self.kind(q) != Kind::Permanent)
            .all(|q| self.state_is_deterministic(q))
    }

    fn state_is_deterministic(&self, q: StateId) -> bool {
        let mut bdd = bdd::Bdd::new();
        let rules: Vec<(bdd::Node, &Vec<StateId>)> = self
            .rules_from(q)
            .map(|r| (bdd.build(&r.guard), &r.targets))
            .filter(|(g, _)| *g != bdd::FALSE)
            .collect();
        let mut cover = bdd::FALSE;
        for (i, (g, t)) in rules.iter().enumerate() {
            if t.len() != 1 {
                return false;
            }
            for (h, u) in &rules[..i] {
                if t != u && bdd.and(*g, *h) != bdd::FALSE {
                    return false;
                }
            }
            cover = bdd.or(cover, *g);
        }
        cover == bdd::TRUE
    }

    /// Structural equality up to logical equivalence of guards and of the
    /// accepting condition.
    pub fn same_as(&self, other: &Adga) -> bool {
        if self.alphabets != other.alphabets
            || self.states != other.states
            || self.init != other.init
            || self.rules.len() != other.rules.len()
        {
            return false;
        }
        let mut guards = bdd::Bdd::new();
        for (r, s) in self.rules.iter().zip(&other.rules) {
            if r.source != s.source || r.targets != s.targets || guards.build(&r.guard) != guards.build(&s.guard) {
                return false;
            }
        }
        let mut conds = bdd::Bdd::new();
        conds.build(&self.accepting) == conds.build(&other.accepting)
    }

    /// Rebuilds a builder holding the same states, rules and condition.
    pub fn to_builder(&self) -> AdgaBuilder {
        let mut b = AdgaBuilder::new(self.alphabets.clone());
        for s in &self.states {
            b.declare(s.name.clone(), s.kind);
        }
        for (a, &q) in self.init.iter().enumerate() {
            b.init(a, q);
        }
        b.rules = self.rules.clone();
        b.accepting = self.accepting.clone();
        b
    }

    /// Same states, rules and initial map, with a different accepting condition.
    pub fn with_accepting(&self, cond: AcceptCondition) -> Adga {
        let mut b = self.to_builder();
        b.accept(cond);
        b.build().expect("accepting condition over permanent states")
    }

    /// Same automaton, with the node alphabet replaced and `init` re-indexed:
    /// new label `a` starts where old label `source_label(a)` started.
    pub fn relabel(&self, nodes: crate::graph::Alphabet, source_label: impl Fn(usize) -> usize) -> Adga {
        let mut b = self.to_builder();
        b.alphabets = Alphabets::new(nodes, self.alphabets.edges.clone());
        b.init = (0..b.alphabets.nodes.len()).map(|a| Some(self.init[source_label(a)])).collect();
        b.build().expect("relabeling preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::builtin;

    fn blank_builder() -> AdgaBuilder {
        AdgaBuilder::new(Alphabets::blank())
    }

    #[test]
    fn color3_levels() {
        let a = builtin::color3();
        let lv = |n: &str| a.level(a.state_id(n).unwrap());
        assert_eq!(lv("ini"), 0);
        for c in ["spade", "heart", "club"] {
            assert_eq!(lv(c), 1);
        }
        assert_eq!(lv("yes"), 2);
        assert_eq!(lv("no"), 2);
        assert_eq!(a.length(), 2);
        assert_eq!(a.class(), Class::Ndga);
    }

    #[test]
    fn rejects_missing_permanent_states() {
        let mut b = blank_builder();
        let q = b.declare("q", Kind::Existential);
        b.init(0, q);
        let err = b.build().unwrap_err();
        assert!(err.0.contains(&Violation::NoPermanentStates));
    }

    #[test]
    fn rejects_same_level_rule() {
        let mut b = blank_builder();
        let q = b.declare("q", Kind::Existential);
        let r = b.declare("r", Kind::Existential);
        let p = b.declare("p", Kind::Permanent);
        b.init(0, q);
        b.rule(q, BoolExpr::t(), [r]);
        b.rule(r, BoolExpr::t(), [p]);
        b.rule(q, BoolExpr::t(), [q]);
        assert!(matches!(b.build().unwrap_err().0[0], Violation::Cycle(_)));
    }

    #[test]
    fn rejects_level_conflict_and_interior_init() {
        let mut b = blank_builder();
        let q0 = b.declare("q0", Kind::Existential);
        let q1 = b.declare("q1", Kind::Existential);
        let q2 = b.declare("q2", Kind::Existential);
        let p = b.declare("p", Kind::Permanent);
        b.init(0, q0);
        b.rule(q0, BoolExpr::t(), [q1]);
        b.rule(q1, BoolExpr::t(), [q2]);
        b.rule(q0, BoolExpr::t(), [q2]);
        b.rule(q2, BoolExpr::t(), [p]);
        assert!(matches!(b.build().unwrap_err().0[0], Violation::LevelConflict { .. }));

        let mut b = blank_builder();
        let q0 = b.declare("q0", Kind::Existential);
        let q1 = b.declare("q1", Kind::Existential);
        let p = b.declare("p", Kind::Permanent);
        b.init(0, q1);
        b.rule(q0, BoolExpr::t(), [q1]);
        b.rule(q1, BoolExpr::t(), [p]);
        assert!(matches!(b.build().unwrap_err().0[0], Violation::InitIntoInterior { .. }));
    }

    #[test]
    fn rejects_mixed_kinds_and_bad_accepting() {
        let mut b = blank_builder();
        let q = b.declare("q", Kind::Existential);
        let u = b.declare("u", Kind::Universal);
        let p = b.declare("p", Kind::Permanent);
        b.init(0, q);
        b.rule(q, BoolExpr::t(), [p]);
        b.rule(u, BoolExpr::t(), [p]);
        b.accept(BoolExpr::atom(q));
        let errs = b.build().unwrap_err().0;
        assert!(errs.contains(&Violation::NonPermanentAccepting("q".into())));

        let mut b = blank_builder();
        let q = b.declare("q", Kind::Existential);
        let u = b.declare("u", Kind::Universal);
        let p = b.declare("p", Kind::Permanent);
        b.init(0, q);
        b.rule(q, BoolExpr::t(), [p]);
        b.rule(u, BoolExpr::t(), [p]);
        assert_eq!(b.build().unwrap_err().0, vec![Violation::MixedKindLevel(0)]);
    }

    #[test]
    fn rejects_rule_from_permanent() {
        let mut b = blank_builder();
        let p = b.declare("p", Kind::Permanent);
        b.init(0, p);
        b.rule(p, BoolExpr::t(), [p]);
        assert_eq!(b.build().unwrap_err().0, vec![Violation::RuleFromPermanent("p".into())]);
    }

    #[test]
    fn length_zero_and_warning() {
        let mut b = blank_builder();
        let p = b.declare("p", Kind::Permanent);
        b.init(0, p);
        b.accept_set(&[]);
        let a = b.build().unwrap();
        assert_eq!(a.length(), 0);
        assert_eq!(a.warnings().len(), 1);
        assert_eq!(a.class(), Class::Ddga);
    }

    #[test]
    fn color3_local_successors() {
        let a = builtin::color3();
        let id = |n: &str| a.state_id(n).unwrap();
        let s = |qs: &[&str]| vec![qs.iter().map(|n| id(n)).collect::<BTreeSet<_>>()];
        assert_eq!(a.local_successors(id("spade"), &s(&["spade", "heart"])), vec![id("no")]);
        assert_eq!(a.local_successors(id("spade"), &s(&["heart"])), vec![id("yes")]);
        assert_eq!(a.local_successors(id("yes"), &s(&["heart"])), vec![id("yes")]);
        assert_eq!(a.local_successors(id("ini"), &s(&[])).len(), 3);
    }

    #[test]
    fn classification() {
        assert_eq!(builtin::color3().class(), Class::Ndga);
        assert_eq!(builtin::not_color3().class(), Class::Adga);
        assert_eq!(builtin::trivial(true).class(), Class::Ddga);
        assert_eq!(builtin::colored(&["x", "y"]).class(), Class::Ddga);
    }

    #[test]
    fn builder_disambiguates_names() {
        let mut b = blank_builder();
        let x = b.state("a b", Kind::Permanent);
        let y = b.state("a_b", Kind::Permanent);
        assert_ne!(x, y);
        b.init(0, x);
        let a = b.build().unwrap();
        assert_eq!(a.name(x), "a_b");
        assert_eq!(a.name(y), "a_b~2");
    }
}
