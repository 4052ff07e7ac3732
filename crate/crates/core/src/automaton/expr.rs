use std::collections::BTreeSet;

/// Propositional formula over atoms of type `A`.
///
/// Used both for transition guards (atoms are "state `q` was received
/// through a γ-edge") and for acceptance conditions (atoms are "permanent
/// state `p` occurs in the final configuration").
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr<A> {
    Const(bool),
    Atom(A),
    Not(Box<BoolExpr<A>>),
    And(Vec<BoolExpr<A>>),
    Or(Vec<BoolExpr<A>>),
}

impl<A: Clone> BoolExpr<A> {
    pub fn t() -> Self {
        BoolExpr::Const(true)
    }

    pub fn f() -> Self {
        BoolExpr::Const(false)
    }

    pub fn atom(a: A) -> Self {
        BoolExpr::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Self) -> Self {
        match e {
            BoolExpr::Const(b) => BoolExpr::Const(!b),
            BoolExpr::Not(inner) => *inner,
            e => BoolExpr::Not(Box::new(e)),
        }
    }

    pub fn and(items: impl IntoIterator<Item = Self>) -> Self {
        let mut out = Vec::new();
        for e in items {
            match e {
                BoolExpr::Const(true) => {}
                BoolExpr::Const(false) => return BoolExpr::Const(false),
                BoolExpr::And(inner) => out.extend(inner),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => BoolExpr::Const(true),
            1 => out.pop().expect("one item"),
            _ => BoolExpr::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Self>) -> Self {
        let mut out = Vec::new();
        for e in items {
            match e {
                BoolExpr::Const(false) => {}
                BoolExpr::Const(true) => return BoolExpr::Const(true),
                BoolExpr::Or(inner) => out.extend(inner),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => BoolExpr::Const(false),
            1 => out.pop().expect("one item"),
            _ => BoolExpr::Or(out),
        }
    }

    pub fn eval(&self, atom: &impl Fn(&A) -> bool) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Atom(a) => atom(a),
            BoolExpr::Not(e) => !e.eval(atom),
            BoolExpr::And(es) => es.iter().all(|e| e.eval(atom)),
            BoolExpr::Or(es) => es.iter().any(|e| e.eval(atom)),
        }
    }

    /// Substitutes every atom, simplifying constants on the way.
    pub fn map_atoms<B: Clone>(&self, f: &mut impl FnMut(&A) -> BoolExpr<B>) -> BoolExpr<B> {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Atom(a) => f(a),
            BoolExpr::Not(e) => BoolExpr::not(e.map_atoms(f)),
            BoolExpr::And(es) => BoolExpr::and(es.iter().map(|e| e.map_atoms(f)).collect::<Vec<_>>()),
            BoolExpr::Or(es) => BoolExpr::or(es.iter().map(|e| e.map_atoms(f)).collect::<Vec<_>>()),
        }
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Atom(a) => f(a),
            BoolExpr::Not(e) => e.for_each_atom(f),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.for_each_atom(f)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<A>
    where
        A: Ord,
    {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.clone());
        });
        out
    }

    pub fn is_const(&self, value: bool) -> bool {
        matches!(self, BoolExpr::Const(b) if *b == value)
    }
}
