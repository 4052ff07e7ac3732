//! A round-synchronous programming language over labeled graphs.
//!
//! Every node holds a valuation of the program variables over a finite
//! domain; the global state is the graph labeled by valuations. A round
//! (`each v { .. }`) optionally sends one variable to all neighbors, then
//! runs local commands on every node in parallel.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::automaton::{contains, Adga, AdgaBuilder, BoolExpr, Class, Kind, StateId};
use crate::automaton::synchronize;
use crate::graph::{Alphabet, Alphabets, LabeledGraph};
use crate::hoare::{compile_assertion, Assertion};

pub mod parse;

pub use parse::{parse_assertion, parse_dpl, write_dpl, DplParseError};

pub type Val = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DplError {
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("invalid variables: {0}")]
    Vars(String),
    #[error("bad valuation label `{0}`")]
    Label(String),
    #[error("fuel exhausted after {0} loop iterations")]
    FuelExhausted(usize),
    #[error("the automaton must be a syntactic DDGA, got {0}")]
    NotDeterministic(Class),
    #[error("the automaton's node alphabet is not the valuation alphabet")]
    AlphabetMismatch,
    #[error("the graph's labels are not valuations of this program")]
    GraphMismatch,
}

/// A finite, ascending set of nonnegative integers containing 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain(Vec<Val>);

impl Domain {
    pub fn new(values: impl IntoIterator<Item = Val>) -> Result<Self, DplError> {
        let values: Vec<Val> = values.into_iter().collect();
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DplError::Domain("values must be strictly ascending".into()));
        }
        if !values.contains(&0) {
            return Err(DplError::Domain("the domain must contain 0".into()));
        }
        Ok(Domain(values))
    }

    /// `0..=max`.
    pub fn range(max: Val) -> Self {
        Domain((0..=max).collect())
    }

    pub fn values(&self) -> &[Val] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> Val {
        self.0[0]
    }

    pub fn max(&self) -> Val {
        *self.0.last().expect("nonempty")
    }

    pub fn contains(&self, v: Val) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn index_of(&self, v: Val) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    /// The largest member not above `x`, or the minimum if there is none.
    pub fn round(&self, x: i64) -> Val {
        self.0.iter().rev().find(|&&v| i64::from(v) <= x).copied().unwrap_or(self.min())
    }
}

/// Valuations of `vars` over `domain`, numbered with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    pub domain: Domain,
    pub vars: Vec<String>,
}

/// Valuation alphabets larger than this are refused.
pub const MAX_VALUATIONS: usize = 1 << 16;

impl StateSpace {
    pub fn new(domain: Domain, vars: Vec<String>) -> Result<Self, DplError> {
        if vars.is_empty() {
            return Err(DplError::Vars("at least one variable is needed".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if v == "M" {
                return Err(DplError::Vars("`M` is reserved for received messages".into()));
            }
            if !seen.insert(v) {
                return Err(DplError::Vars(format!("`{v}` is declared twice")));
            }
        }
        let count = (domain.len() as u128).checked_pow(vars.len() as u32);
        if count.is_none_or(|c| c > MAX_VALUATIONS as u128) {
            return Err(DplError::Vars(format!("more than {MAX_VALUATIONS} valuations")));
        }
        Ok(StateSpace { domain, vars })
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn valuation_count(&self) -> usize {
        self.domain.len().pow(self.vars.len() as u32)
    }

    pub fn index(&self, valuation: &[Val]) -> usize {
        valuation.iter().fold(0, |acc, &v| {
            acc * self.domain.len() + self.domain.index_of(v).expect("value in domain")
        })
    }

    pub fn valuation(&self, mut index: usize) -> Vec<Val> {
        let k = self.domain.len();
        let mut out = vec![0; self.vars.len()];
        for slot in out.iter_mut().rev() {
            *slot = self.domain.values()[index % k];
            index /= k;
        }
        out
    }

    /// `m=1,m_old=0`.
    pub fn symbol(&self, index: usize) -> String {
        self.vars
            .iter()
            .zip(self.valuation(index))
            .map(|(x, v)| format!("{x}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new((0..self.valuation_count()).map(|i| self.symbol(i))).expect("distinct valuations")
    }

    pub fn alphabets(&self) -> Alphabets {
        Alphabets::new(self.alphabet(), Alphabet::blank())
    }

    /// Reads `x=v,...` in any order; variables left out are 0.
    pub fn parse_label(&self, label: &str) -> Result<usize, DplError> {
        let bad = || DplError::Label(label.to_string());
        let mut val = vec![0; self.vars.len()];
        for part in label.split(',').filter(|p| !p.is_empty()) {
            let (x, v) = part.split_once('=').ok_or_else(bad)?;
            let i = self.var(x.trim()).ok_or_else(bad)?;
            let v: Val = v.trim().parse().map_err(|_| bad())?;
            if !self.domain.contains(v) {
                return Err(bad());
            }
            val[i] = v;
        }
        Ok(self.index(&val))
    }

    pub fn label_graph(&self, graph: crate::graph::Graph, valuations: &[Vec<Val>]) -> LabeledGraph {
        let labels = valuations.iter().map(|v| self.index(v)).collect();
        LabeledGraph::new(graph, labels).expect("one valuation per node")
    }

    pub fn valuations_of(&self, g: &LabeledGraph) -> Vec<Vec<Val>> {
        g.labels.iter().map(|&l| self.valuation(l)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggOp {
    Max,
    Min,
}

/// Which node a variable reference reads: the node itself, or, in edge
/// assertions, the sending neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Own,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Val),
    Var(Side, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// Maximum or minimum over `args`, together with the received
    /// messages if `messages` is set.
    Agg { op: AggOp, messages: bool, args: Vec<Expr> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExpr {
    Const(bool),
    Cmp(CmpOp, Expr, Expr),
    Not(Box<BExpr>),
    And(Vec<BExpr>),
    Or(Vec<BExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cmd {
    Skip,
    Assign(usize, Expr),
    If(BExpr, Vec<Cmd>, Vec<Cmd>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalBlock {
    /// The variable sent to all neighbors before the commands run.
    pub send: Option<usize>,
    pub cmds: Vec<Cmd>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobalCmd {
    Each { block: LocalBlock, line: usize },
    Assert { assertion: Assertion, line: usize },
    While { cond: Assertion, invariant: Option<Assertion>, body: Vec<GlobalCmd>, line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub name: String,
    pub space: StateSpace,
    pub require: Option<(Assertion, usize)>,
    pub body: Vec<GlobalCmd>,
    pub ensure: Option<(Assertion, usize)>,
}

/// Values visible to an expression.
#[derive(Clone, Copy)]
pub struct Frame<'a> {
    pub own: &'a [Val],
    pub other: Option<&'a [Val]>,
    pub messages: Option<&'a BTreeSet<Val>>,
}

impl<'a> Frame<'a> {
    pub fn local(own: &'a [Val], messages: Option<&'a BTreeSet<Val>>) -> Self {
        Frame { own, other: None, messages }
    }
}

/// Evaluates with saturating arithmetic; results outside the domain round
/// down to a member. `max` of nothing is the domain minimum, `min` of
/// nothing the maximum.
pub fn eval_expr(e: &Expr, dom: &Domain, f: Frame) -> Val {
    match e {
        Expr::Const(c) => *c,
        Expr::Var(Side::Own, x) => f.own[*x],
        Expr::Var(Side::Other, x) => f.other.expect("edge assertions supply the sender")[*x],
        Expr::Add(a, b) => dom.round(i64::from(eval_expr(a, dom, f)) + i64::from(eval_expr(b, dom, f))),
        Expr::Sub(a, b) => dom.round(i64::from(eval_expr(a, dom, f)) - i64::from(eval_expr(b, dom, f))),
        Expr::Agg { op, messages, args } => {
            let mut items: Vec<Val> = args.iter().map(|a| eval_expr(a, dom, f)).collect();
            if *messages {
                items.extend(f.messages.expect("blocks that read M receive messages"));
            }
            match op {
                AggOp::Max => items.into_iter().max().unwrap_or(dom.min()),
                AggOp::Min => items.into_iter().min().unwrap_or(dom.max()),
            }
        }
    }
}

pub fn eval_bexpr(b: &BExpr, dom: &Domain, f: Frame) -> bool {
    match b {
        BExpr::Const(c) => *c,
        BExpr::Cmp(op, x, y) => {
            let (x, y) = (eval_expr(x, dom, f), eval_expr(y, dom, f));
            match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
            }
        }
        BExpr::Not(c) => !eval_bexpr(c, dom, f),
        BExpr::And(cs) => cs.iter().all(|c| eval_bexpr(c, dom, f)),
        BExpr::Or(cs) => cs.iter().any(|c| eval_bexpr(c, dom, f)),
    }
}

fn exec_cmds(cmds: &[Cmd], dom: &Domain, val: &mut Vec<Val>, messages: Option<&BTreeSet<Val>>) {
    for c in cmds {
        match c {
            Cmd::Skip => {}
            Cmd::Assign(x, e) => {
                let v = eval_expr(e, dom, Frame::local(val, messages));
                val[*x] = v;
            }
            Cmd::If(b, then, els) => {
                let branch = if eval_bexpr(b, dom, Frame::local(val, messages)) { then } else { els };
                exec_cmds(branch, dom, val, messages);
            }
        }
    }
}

/// Runs a block on one node with the given received values.
pub fn exec_block(block: &LocalBlock, dom: &Domain, val: &[Val], messages: &BTreeSet<Val>) -> Vec<Val> {
    let mut out = val.to_vec();
    let messages = block.send.map(|_| messages);
    exec_cmds(&block.cmds, dom, &mut out, messages);
    out
}

/// One synchronous round. Messages travel along incoming edges of every
/// edge symbol and are computed from the state before the round.
pub fn step_round(block: &LocalBlock, space: &StateSpace, g: &LabeledGraph) -> LabeledGraph {
    let before = space.valuations_of(g);
    let incoming = g.graph.incoming();
    let after: Vec<Vec<Val>> = (0..g.node_count())
        .map(|v| {
            let messages: BTreeSet<Val> = match block.send {
                Some(x) => incoming.iter().flat_map(|per| per[v].iter().map(|&u| before[u][x])).collect(),
                None => BTreeSet::new(),
            };
            exec_block(block, &space.domain, &before[v], &messages)
        })
        .collect();
    space.label_graph(g.graph.clone(), &after)
}

fn edge_alphabet(k: usize) -> Alphabet {
    if k == 1 {
        Alphabet::blank()
    } else {
        Alphabet::new((0..k).map(|i| format!("e{i}"))).expect("distinct")
    }
}

struct Runner<'a> {
    space: &'a StateSpace,
    edges: Alphabet,
    conditions: HashMap<usize, Adga>,
    fuel: usize,
    used: usize,
}

impl Runner<'_> {
    fn run(&mut self, cmds: &[GlobalCmd], mut g: LabeledGraph) -> Result<LabeledGraph, DplError> {
        for c in cmds {
            match c {
                GlobalCmd::Each { block, .. } => g = step_round(block, self.space, &g),
                GlobalCmd::Assert { .. } => {}
                GlobalCmd::While { cond, body, line, .. } => loop {
                    let (space, edges) = (self.space, &self.edges);
                    let a = self
                        .conditions
                        .entry(*line)
                        .or_insert_with(|| compile_assertion(cond, space, edges));
                    if !a.accepts(&g) {
                        break;
                    }
                    if self.used == self.fuel {
                        return Err(DplError::FuelExhausted(self.used));
                    }
                    self.used += 1;
                    g = self.run(body, g)?;
                },
            }
        }
        Ok(g)
    }
}

/// Executes the program; `fuel` bounds the total number of loop iterations.
pub fn run_program(p: &Program, g: &LabeledGraph, fuel: usize) -> Result<LabeledGraph, DplError> {
    if g.labels.iter().any(|&l| l >= p.space.valuation_count()) {
        return Err(DplError::GraphMismatch);
    }
    let mut r = Runner {
        space: &p.space,
        edges: edge_alphabet(g.graph.edge_symbol_count()),
        conditions: HashMap::new(),
        fuel,
        used: 0,
    };
    r.run(&p.body, g.clone())
}

/// An automaton accepting a global state iff `a` accepts the state after
/// running `block` once.
///
/// A new first level holds one state per valuation. A node in state `a`
/// reads which values its neighbors sent off the received states, runs the
/// block, and enters the initial state of `a` for the resulting valuation.
pub fn wp_round(block: &LocalBlock, space: &StateSpace, a: &Adga) -> Result<Adga, DplError> {
    if a.class() != Class::Ddga {
        return Err(DplError::NotDeterministic(a.class()));
    }
    if a.alphabets().nodes != space.alphabet() {
        return Err(DplError::AlphabetMismatch);
    }
    let a = synchronize(a, a.length()).expect("an automaton synchronizes to its own length");
    let edge_count = a.alphabets().edges.len();
    let mut b = AdgaBuilder::new(a.alphabets().clone());
    let pre: Vec<StateId> = (0..space.valuation_count())
        .map(|i| b.state(space.symbol(i), Kind::Existential))
        .collect();
    let map: Vec<StateId> = (0..a.state_count()).map(|q| b.state(a.name(q), a.kind(q))).collect();
    for (i, &q) in pre.iter().enumerate() {
        b.init(i, q);
    }

    // received(c): some neighbor sent value c.
    let pre_states = &pre;
    let received = |x: usize, c: Val| {
        BoolExpr::or(
            (0..space.valuation_count())
                .filter(|&i| space.valuation(i)[x] == c)
                .flat_map(|i| (0..edge_count).map(move |gamma| contains(gamma, pre_states[i]))),
        )
    };
    let values = space.domain.values();
    for (i, &q) in pre.iter().enumerate() {
        let val = space.valuation(i);
        let Some(x) = block.send else {
            let next = space.index(&exec_block(block, &space.domain, &val, &BTreeSet::new()));
            b.rule(q, BoolExpr::t(), [map[a.init(next)]]);
            continue;
        };
        let heard: Vec<_> = values.iter().map(|&c| received(x, c)).collect();
        let mut by_target: BTreeMap<StateId, Vec<BoolExpr<_>>> = BTreeMap::new();
        for subset in 0..1usize << values.len() {
            let messages: BTreeSet<Val> =
                values.iter().enumerate().filter(|(k, _)| subset >> k & 1 == 1).map(|(_, &c)| c).collect();
            let next = space.index(&exec_block(block, &space.domain, &val, &messages));
            let guard = BoolExpr::and(heard.iter().enumerate().map(|(k, h)| {
                if subset >> k & 1 == 1 {
                    h.clone()
                } else {
                    BoolExpr::not(h.clone())
                }
            }));
            by_target.entry(map[a.init(next)]).or_default().push(guard);
        }
        for (target, guards) in by_target {
            b.rule(q, BoolExpr::or(guards), [target]);
        }
    }
    for r in a.rules() {
        let guard = r.guard.map_atoms(&mut |&(gamma, s)| contains(gamma, map[s]));
        b.rule(map[r.source], guard, r.targets.iter().map(|&t| map[t]));
    }
    b.accept(a.accepting().map_atoms(&mut |&p| BoolExpr::atom(map[p])));
    Ok(b.build().expect("the weakest-precondition automaton is valid"))
}
