//! Direct model checking.
//!
//! Quantifiers range over all nodes or all node sets. A block of adjacent
//! set quantifiers is enumerated node by node under three-valued logic, so
//! a partial choice is abandoned as soon as the body's value is settled.

use std::collections::HashMap;

use super::{is_set_var, Assignment, Formula, MsoError, MsoFormula};
use crate::graph::LabeledGraph;

type Slot = usize;

enum E {
    Const(bool),
    Lab(usize, Slot),
    Edge(usize, Slot, Slot),
    Eq(Slot, Slot),
    In(Slot, Slot),
    Not(Box<E>),
    And(Vec<E>),
    Or(Vec<E>),
    Implies(Box<E>, Box<E>),
    Iff(Box<E>, Box<E>),
    NodeQ { exists: bool, slot: Slot, body: Box<E> },
    /// `free` lists set slots bound outside the block that the body reads.
    SetQ { exists: bool, slots: Vec<Slot>, body: Box<E>, free: Vec<Slot> },
}

struct Resolver {
    scope: Vec<(String, Slot)>,
    slots: usize,
    set_slots: Vec<bool>,
}

impl Resolver {
    fn fresh(&mut self, name: &str) -> Slot {
        let s = self.slots;
        self.slots += 1;
        self.set_slots.push(is_set_var(name));
        self.scope.push((name.to_string(), s));
        s
    }

    fn lookup(&self, name: &str) -> Slot {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, s)| s)
            .expect("free variables are bound before resolution")
    }

    fn resolve(&mut self, f: &Formula, reads: &mut Vec<Slot>) -> E {
        let read = |s: Slot, reads: &mut Vec<Slot>| {
            if !reads.contains(&s) {
                reads.push(s);
            }
            s
        };
        match f {
            Formula::True => E::Const(true),
            Formula::False => E::Const(false),
            Formula::Lab { label, x } => E::Lab(*label, self.lookup(x)),
            Formula::Edge { symbol, x, y } => E::Edge(*symbol, self.lookup(x), self.lookup(y)),
            Formula::Eq(x, y) => E::Eq(self.lookup(x), self.lookup(y)),
            Formula::In(x, s) => {
                let s = read(self.lookup(s), reads);
                E::In(self.lookup(x), s)
            }
            Formula::Not(g) => E::Not(Box::new(self.resolve(g, reads))),
            Formula::And(gs) => E::And(gs.iter().map(|g| self.resolve(g, reads)).collect()),
            Formula::Or(gs) => E::Or(gs.iter().map(|g| self.resolve(g, reads)).collect()),
            Formula::Implies(a, b) => E::Implies(Box::new(self.resolve(a, reads)), Box::new(self.resolve(b, reads))),
            Formula::Iff(a, b) => E::Iff(Box::new(self.resolve(a, reads)), Box::new(self.resolve(b, reads))),
            Formula::Exists(v, first_body) | Formula::Forall(v, first_body) => {
                let exists = matches!(f, Formula::Exists(..));
                let mark = self.scope.len();
                if !is_set_var(v) {
                    let slot = self.fresh(v);
                    let body = self.resolve(first_body, reads);
                    self.scope.truncate(mark);
                    return E::NodeQ { exists, slot, body: Box::new(body) };
                }
                let mut slots = Vec::new();
                let mut cur = f;
                loop {
                    match (cur, exists) {
                        (Formula::Exists(v, body), true) | (Formula::Forall(v, body), false) if is_set_var(v) => {
                            slots.push(self.fresh(v));
                            cur = body;
                        }
                        _ => break,
                    }
                }
                let mut inner = Vec::new();
                let body = self.resolve(cur, &mut inner);
                self.scope.truncate(mark);
                let free: Vec<Slot> = inner.into_iter().filter(|s| !slots.contains(s)).collect();
                for &s in &free {
                    read(s, reads);
                }
                E::SetQ { exists, slots, body: Box::new(body), free }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Val {
    Node(usize),
    /// Membership bits, of which only those in `known` are decided.
    Set { known: u64, value: u64 },
}

struct Checker<'a> {
    g: &'a LabeledGraph,
    n: usize,
    full: u64,
    env: Vec<Val>,
}

fn kleene_and(items: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    let mut unknown = false;
    for r in items {
        match r {
            Some(false) => return Some(false),
            None => unknown = true,
            Some(true) => {}
        }
    }
    if unknown {
        None
    } else {
        Some(true)
    }
}

fn kleene_or(items: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    kleene_and(items.map(|r| r.map(|b| !b))).map(|b| !b)
}

impl Checker<'_> {
    fn node(&self, s: Slot) -> usize {
        match self.env[s] {
            Val::Node(v) => v,
            Val::Set { .. } => unreachable!("node slot"),
        }
    }

    fn eval(&mut self, e: &E) -> Option<bool> {
        match e {
            E::Const(b) => Some(*b),
            E::Lab(a, x) => Some(self.g.labels[self.node(*x)] == *a),
            E::Edge(gamma, x, y) => Some(self.g.graph.has_edge(*gamma, self.node(*x), self.node(*y))),
            E::Eq(x, y) => Some(self.node(*x) == self.node(*y)),
            E::In(x, s) => {
                let v = self.node(*x);
                match self.env[*s] {
                    Val::Set { known, value } if known >> v & 1 == 1 => Some(value >> v & 1 == 1),
                    Val::Set { .. } => None,
                    Val::Node(_) => unreachable!("set slot"),
                }
            }
            E::Not(g) => self.eval(g).map(|b| !b),
            E::And(gs) => {
                let mut unknown = false;
                for g in gs {
                    match self.eval(g) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            E::Or(gs) => {
                let mut unknown = false;
                for g in gs {
                    match self.eval(g) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            E::Implies(a, b) => {
                let a = self.eval(a);
                if a == Some(false) {
                    return Some(true);
                }
                kleene_or([a.map(|x| !x), self.eval(b)].into_iter())
            }
            E::Iff(a, b) => match (self.eval(a), self.eval(b)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            },
            E::NodeQ { exists, slot, body } => {
                let mut unknown = false;
                for v in 0..self.n {
                    self.env[*slot] = Val::Node(v);
                    match self.eval(body) {
                        Some(b) if b == *exists => return Some(b),
                        None => unknown = true,
                        Some(_) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(!*exists)
                }
            }
            E::SetQ { exists, slots, body, free } => {
                let settled = free.iter().all(|&s| matches!(self.env[s], Val::Set { known, .. } if known == self.full));
                if !settled {
                    return None;
                }
                for &s in slots {
                    self.env[s] = Val::Set { known: 0, value: 0 };
                }
                Some(self.search(*exists, slots, body, 0))
            }
        }
    }

    /// Decision `d` fixes membership of node `d / k` in set `slots[d % k]`.
    fn search(&mut self, exists: bool, slots: &[Slot], body: &E, d: usize) -> bool {
        if let Some(b) = self.eval(body) {
            return b;
        }
        let k = slots.len();
        assert!(d < k * self.n, "fully assigned body is decided");
        let (v, s) = (d / k, slots[d % k]);
        let Val::Set { known, value } = self.env[s] else { unreachable!() };
        let mut result = !exists;
        for bit in [0u64, 1] {
            self.env[s] = Val::Set { known: known | 1 << v, value: value | bit << v };
            if self.search(exists, slots, body, d + 1) == exists {
                result = exists;
                break;
            }
        }
        self.env[s] = Val::Set { known, value };
        result
    }
}

/// Truth of `phi` on `g` under `alpha`, whose domain must be exactly the
/// free variables of `phi`.
pub fn eval_mso(phi: &MsoFormula, g: &LabeledGraph, alpha: &Assignment) -> Result<bool, MsoError> {
    g.check(&phi.alphabets)?;
    let free = phi.free_vars();
    if alpha.domain() != free {
        return Err(MsoError::Assignment(format!(
            "expected values for {{{}}}, got {{{}}}",
            free.iter().cloned().collect::<Vec<_>>().join(", "),
            alpha.domain().into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    let n = g.node_count();
    assert!(n <= 64, "model checking supports at most 64 nodes");
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut r = Resolver { scope: Vec::new(), slots: 0, set_slots: Vec::new() };
    let mut env = Vec::new();
    let mut values: HashMap<Slot, Val> = HashMap::new();
    for v in &free {
        let slot = r.fresh(v);
        let val = if is_set_var(v) {
            let set = alpha
                .sets
                .get(v)
                .ok_or_else(|| MsoError::Assignment(format!("`{v}` needs a node set")))?;
            let mut value = 0u64;
            for &u in set {
                if u >= n {
                    return Err(MsoError::Assignment(format!("node {u} out of range for `{v}`")));
                }
                value |= 1 << u;
            }
            Val::Set { known: full, value }
        } else {
            let &u = alpha
                .nodes
                .get(v)
                .ok_or_else(|| MsoError::Assignment(format!("`{v}` needs a node")))?;
            if u >= n {
                return Err(MsoError::Assignment(format!("node {u} out of range for `{v}`")));
            }
            Val::Node(u)
        };
        values.insert(slot, val);
    }
    let e = r.resolve(&phi.formula, &mut Vec::new());
    for s in 0..r.slots {
        env.push(values.get(&s).copied().unwrap_or(Val::Node(0)));
    }
    let mut c = Checker { g, n, full, env };
    Ok(c.eval(&e).expect("closed formulas evaluate to a truth value"))
}
