//! Minimal reduced ordered BDDs, used to decide satisfiability and validity
//! of guard formulas during determinism analysis.

use std::collections::HashMap;
use std::hash::Hash;

use super::expr::BoolExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node(u32);

pub const FALSE: Node = Node(0);
pub const TRUE: Node = Node(1);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
}

pub struct Bdd<A> {
    // (variable, low, high); entries 0 and 1 are the terminals.
    nodes: Vec<(u32, Node, Node)>,
    unique: HashMap<(u32, Node, Node), Node>,
    apply_memo: HashMap<(Op, Node, Node), Node>,
    not_memo: HashMap<Node, Node>,
    vars: HashMap<A, u32>,
}

impl<A: Clone + Eq + Hash> Default for Bdd<A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<A: Clone + Eq + Hash> Bdd<A> {
    pub fn new() -> Self {
        Bdd {
            nodes: vec![(u32::MAX, FALSE, FALSE), (u32::MAX, TRUE, TRUE)],
            unique: HashMap::new(),
            apply_memo: HashMap::new(),
            not_memo: HashMap::new(),
            vars: HashMap::new(),
        }
    }

    fn mk(&mut self, var: u32, lo: Node, hi: Node) -> Node {
        if lo == hi {
            return lo;
        }
        if let Some(&n) = self.unique.get(&(var, lo, hi)) {
            return n;
        }
        let n = Node(self.nodes.len() as u32);
        self.nodes.push((var, lo, hi));
        self.unique.insert((var, lo, hi), n);
        n
    }

    fn var_of(&self, n: Node) -> u32 {
        self.nodes[n.0 as usize].0
    }

    pub fn var(&mut self, atom: &A) -> Node {
        let next = self.vars.len() as u32;
        let v = *self.vars.entry(atom.clone()).or_insert(next);
        self.mk(v, FALSE, TRUE)
    }

    pub fn not(&mut self, n: Node) -> Node {
        match n {
            FALSE => return TRUE,
            TRUE => return FALSE,
            _ => {}
        }
        if let Some(&r) = self.not_memo.get(&n) {
            return r;
        }
        let (v, lo, hi) = self.nodes[n.0 as usize];
        let (lo, hi) = (self.not(lo), self.not(hi));
        let r = self.mk(v, lo, hi);
        self.not_memo.insert(n, r);
        r
    }

    fn apply(&mut self, op: Op, a: Node, b: Node) -> Node {
        match (op, a, b) {
            (Op::And, FALSE, _) | (Op::And, _, FALSE) => return FALSE,
            (Op::And, TRUE, x) | (Op::And, x, TRUE) => return x,
            (Op::Or, TRUE, _) | (Op::Or, _, TRUE) => return TRUE,
            (Op::Or, FALSE, x) | (Op::Or, x, FALSE) => return x,
            _ => {}
        }
        if a == b {
            return a;
        }
        let key = if a.0 <= b.0 { (op, a, b) } else { (op, b, a) };
        if let Some(&r) = self.apply_memo.get(&key) {
            return r;
        }
        let (va, vb) = (self.var_of(a), self.var_of(b));
        let v = va.min(vb);
        let (alo, ahi) = if va == v {
            let (_, lo, hi) = self.nodes[a.0 as usize];
            (lo, hi)
        } else {
            (a, a)
        };
        let (blo, bhi) = if vb == v {
            let (_, lo, hi) = self.nodes[b.0 as usize];
            (lo, hi)
        } else {
            (b, b)
        };
        let lo = self.apply(op, alo, blo);
        let hi = self.apply(op, ahi, bhi);
        let r = self.mk(v, lo, hi);
        self.apply_memo.insert(key, r);
        r
    }

    pub fn and(&mut self, a: Node, b: Node) -> Node {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: Node, b: Node) -> Node {
        self.apply(Op::Or, a, b)
    }

    pub fn build(&mut self, e: &BoolExpr<A>) -> Node {
        match e {
            BoolExpr::Const(true) => TRUE,
            BoolExpr::Const(false) => FALSE,
            BoolExpr::Atom(a) => self.var(a),
            BoolExpr::Not(inner) => {
                let n = self.build(inner);
                self.not(n)
            }
            BoolExpr::And(es) => {
                let mut acc = TRUE;
                for e in es {
                    let n = self.build(e);
                    acc = self.and(acc, n);
                    if acc == FALSE {
                        break;
                    }
                }
                acc
            }
            BoolExpr::Or(es) => {
                let mut acc = FALSE;
                for e in es {
                    let n = self.build(e);
                    acc = self.or(acc, n);
                    if acc == TRUE {
                        break;
                    }
                }
                acc
            }
        }
    }
}

/// True iff some assignment of the (independent) atoms satisfies `e`.
pub fn satisfiable<A: Clone + Eq + Hash>(e: &BoolExpr<A>) -> bool {
    if let BoolExpr::Const(b) = e {
        return *b;
    }
    let mut bdd = Bdd::new();
    bdd.build(e) != FALSE
}
