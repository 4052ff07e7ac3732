//! Monadic second-order logic on labeled graphs.
//!
//! Node variables start with a lower-case letter, set variables with an
//! upper-case one. Formulas carry the alphabets they are written over.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::graph::{Alphabet, Alphabets, GraphError, LabeledGraph};

mod compile;
mod encode;
mod eval;
mod text;

pub use compile::{compile_mso, exactly_one};
pub use encode::mso_of_adga;
pub use eval::eval_mso;
pub use text::{parse_mso, write_mso, MsoParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsoError {
    #[error("assignment does not match the free variables: {0}")]
    Assignment(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Abstract syntax. Label and edge symbols are indices into the alphabets
/// of the enclosing [`MsoFormula`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lab { label: usize, x: String },
    Edge { symbol: usize, x: String, y: String },
    Eq(String, String),
    In(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

pub fn is_set_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_uppercase())
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            f => Formula::Not(Box::new(f)),
        }
    }

    /// Conjunction; empty is `True`, a single item is returned as is.
    pub fn and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().filter(|f| *f != Formula::True).collect();
        if items.contains(&Formula::False) {
            return Formula::False;
        }
        match items.len() {
            0 => Formula::True,
            1 => items.pop().expect("one item"),
            _ => Formula::And(items),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().filter(|f| *f != Formula::False).collect();
        if items.contains(&Formula::True) {
            return Formula::True;
        }
        match items.len() {
            0 => Formula::False,
            1 => items.pop().expect("one item"),
            _ => Formula::Or(items),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: impl IntoIterator<Item = String>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |f, v| Formula::Exists(v, Box::new(f)))
    }

    pub fn forall(vars: impl IntoIterator<Item = String>, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |f, v| Formula::Forall(v, Box::new(f)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Lab { x, .. } => add(x, bound),
            Formula::Edge { x, y, .. } | Formula::Eq(x, y) | Formula::In(x, y) => {
                add(x, bound);
                add(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsoFormula {
    pub alphabets: Alphabets,
    pub formula: Formula,
}

impl MsoFormula {
    pub fn new(alphabets: Alphabets, formula: Formula) -> Self {
        MsoFormula { alphabets, formula }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formula.free_vars()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// Values for the free variables of a formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub nodes: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, BTreeSet<usize>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, var: impl Into<String>, v: usize) -> Self {
        self.nodes.insert(var.into(), v);
        self
    }

    pub fn set(mut self, var: impl Into<String>, vs: impl IntoIterator<Item = usize>) -> Self {
        self.sets.insert(var.into(), vs.into_iter().collect());
        self
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.nodes.keys().chain(self.sets.keys()).cloned().collect()
    }

    /// Every assignment of `vars` on an `n`-node graph.
    pub fn all(vars: &[String], n: usize) -> Vec<Assignment> {
        let mut out = vec![Assignment::new()];
        for v in vars {
            let mut next = Vec::new();
            for a in &out {
                if is_set_var(v) {
                    for mask in 0..1usize << n {
                        next.push(a.clone().set(v.clone(), (0..n).filter(|i| mask >> i & 1 == 1)));
                    }
                } else {
                    for u in 0..n {
                        next.push(a.clone().node(v.clone(), u));
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// The product alphabet Σ × 2^V. Symbol `(a, S)` has index `a << |V| | mask(S)`,
/// where bit `i` of the mask stands for `vars[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedAlphabet {
    pub base: Alphabet,
    pub vars: Vec<String>,
}

impl AnnotatedAlphabet {
    pub fn new(base: Alphabet, vars: impl IntoIterator<Item = String>) -> Self {
        let vars: BTreeSet<String> = vars.into_iter().collect();
        AnnotatedAlphabet { base, vars: vars.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.base.len() << self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, label: usize, mask: usize) -> usize {
        label << self.vars.len() | mask
    }

    pub fn split(&self, symbol: usize) -> (usize, usize) {
        (symbol >> self.vars.len(), symbol & ((1 << self.vars.len()) - 1))
    }

    pub fn bit(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Symbols are written `a` or `a+x+Y`.
    pub fn symbol_name(&self, symbol: usize) -> String {
        let (a, mask) = self.split(symbol);
        let mut s = self.base.symbol(a).to_string();
        for (i, v) in self.vars.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.push('+');
                s.push_str(v);
            }
        }
        s
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new((0..self.len()).map(|s| self.symbol_name(s))).expect("distinct annotated symbols")
    }

    /// The symbol of `self` mapped to the symbol of `narrower` that keeps
    /// only the variables of `narrower`.
    pub fn restrict(&self, symbol: usize, narrower: &AnnotatedAlphabet) -> usize {
        let (a, mask) = self.split(symbol);
        let mut m = 0;
        for (j, v) in narrower.vars.iter().enumerate() {
            let i = self.bit(v).expect("narrower variables are a subset");
            m |= (mask >> i & 1) << j;
        }
        narrower.index(a, m)
    }

    /// The graph `G_{λ×α⁻¹}`.
    pub fn annotate(&self, g: &LabeledGraph, alpha: &Assignment) -> Result<LabeledGraph, MsoError> {
        let mut labels: Vec<usize> = g.labels.iter().map(|&a| self.index(a, 0)).collect();
        for (i, v) in self.vars.iter().enumerate() {
            let members: Vec<usize> = if is_set_var(v) {
                alpha.sets.get(v).map(|s| s.iter().copied().collect())
            } else {
                alpha.nodes.get(v).map(|&u| vec![u])
            }
            .ok_or_else(|| MsoError::Assignment(format!("no value for `{v}`")))?;
            for u in members {
                let l = labels
                    .get_mut(u)
                    .ok_or_else(|| MsoError::Assignment(format!("node {u} out of range for `{v}`")))?;
                *l |= 1 << i;
            }
        }
        Ok(LabeledGraph::new(g.graph.clone(), labels)?)
    }
}
