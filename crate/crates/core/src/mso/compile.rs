//! Formulas to automata, by induction on the formula.
//!
//! A formula with free variables V is compiled over the node alphabet
//! Σ × 2^V (see [`AnnotatedAlphabet`]). Every negation and every
//! quantifier over a subformula with a universal level costs a
//! complement or a projection, and each binary connective or projection
//! adds a level, so automata grow quickly with the nesting depth.

use super::{AnnotatedAlphabet, Formula, MsoError, MsoFormula};
use crate::automaton::{contains, Adga, AdgaBuilder, BoolExpr, Kind};
use crate::constructions::{complement, intersect_adga, project, union};
use crate::graph::{Alphabet, Alphabets, Projection};

struct Compiled {
    adga: Adga,
    ann: AnnotatedAlphabet,
}

struct Compiler<'a> {
    nodes: &'a Alphabet,
    edges: &'a Alphabet,
}

impl Compiler<'_> {
    fn ann(&self, vars: impl IntoIterator<Item = String>) -> AnnotatedAlphabet {
        AnnotatedAlphabet::new(self.nodes.clone(), vars)
    }

    fn alphabets(&self, ann: &AnnotatedAlphabet) -> Alphabets {
        Alphabets::new(ann.alphabet(), self.edges.clone())
    }

    /// Each node reports `yes` or `no` according to its own label.
    fn local(&self, ann: AnnotatedAlphabet, pred: impl Fn(usize, usize) -> bool) -> Compiled {
        let mut b = AdgaBuilder::new(self.alphabets(&ann));
        let yes = b.declare("yes", Kind::Permanent);
        let no = b.declare("no", Kind::Permanent);
        for s in 0..ann.len() {
            let (a, mask) = ann.split(s);
            b.init(s, if pred(a, mask) { yes } else { no });
        }
        b.accept(BoolExpr::not(BoolExpr::atom(no)));
        Compiled { adga: b.build().expect("valid atom automaton"), ann }
    }

    fn constant(&self, value: bool) -> Compiled {
        let ann = self.ann([]);
        let mut b = AdgaBuilder::new(self.alphabets(&ann));
        let p = b.declare("p", Kind::Permanent);
        for s in 0..ann.len() {
            b.init(s, p);
        }
        if value {
            b.accept_set(&[p]);
        }
        Compiled { adga: b.build().expect("valid constant automaton"), ann }
    }

    /// The `y`-marked node checks whether it hears an `x`-marked node over `symbol`.
    fn edge(&self, symbol: usize, x: &str, y: &str) -> Compiled {
        let ann = self.ann([x.to_string(), y.to_string()]);
        let (bx, by) = (1 << ann.bit(x).expect("x"), 1 << ann.bit(y).expect("y"));
        let mut b = AdgaBuilder::new(self.alphabets(&ann));
        let roles: Vec<(bool, bool)> = if x == y {
            vec![(false, false), (true, true)]
        } else {
            vec![(false, false), (true, false), (false, true), (true, true)]
        };
        let name = |&(ix, iy): &(bool, bool)| match (ix, iy) {
            (false, false) => "other",
            (true, false) => "x",
            (false, true) => "y",
            (true, true) => "xy",
        };
        let ids: Vec<_> = roles.iter().map(|r| b.declare(name(r), Kind::Existential)).collect();
        let yes = b.declare("yes", Kind::Permanent);
        let no = b.declare("no", Kind::Permanent);
        for s in 0..ann.len() {
            let (_, mask) = ann.split(s);
            let role = (mask & bx != 0, mask & by != 0);
            let k = roles.iter().position(|r| *r == role).expect("every role has a state");
            b.init(s, ids[k]);
        }
        let heard = BoolExpr::or(
            roles
                .iter()
                .zip(&ids)
                .filter(|(r, _)| r.0)
                .map(|(_, &q)| contains(symbol, q)),
        );
        for (r, &q) in roles.iter().zip(&ids) {
            if r.1 {
                b.rule(q, heard.clone(), [yes]);
                b.rule(q, BoolExpr::not(heard.clone()), [no]);
            } else {
                b.rule(q, BoolExpr::t(), [yes]);
            }
        }
        b.accept(BoolExpr::not(BoolExpr::atom(no)));
        Compiled { adga: b.build().expect("valid edge automaton"), ann }
    }

    fn extend(&self, c: &Compiled, to: &AnnotatedAlphabet) -> Adga {
        if c.ann.vars == to.vars {
            return c.adga.clone();
        }
        c.adga.relabel(to.alphabet(), |s| to.restrict(s, &c.ann))
    }

    fn binary(
        &self,
        l: &Compiled,
        r: &Compiled,
        op: impl Fn(&Adga, &Adga) -> Result<Adga, crate::constructions::ConstructionError>,
    ) -> Result<Compiled, MsoError> {
        let ann = self.ann(l.ann.vars.iter().chain(&r.ann.vars).cloned());
        let adga = op(&self.extend(l, &ann), &self.extend(r, &ann))?;
        Ok(Compiled { adga, ann })
    }

    fn negate(&self, c: Compiled) -> Compiled {
        Compiled { adga: complement(&c.adga), ann: c.ann }
    }

    fn exists(&self, var: &str, c: Compiled) -> Result<Compiled, MsoError> {
        let Some(bit) = c.ann.bit(var) else {
            // Graphs are nonempty, so a vacuous quantifier changes nothing.
            return Ok(c);
        };
        let inner = if super::is_set_var(var) {
            c.adga
        } else {
            intersect_adga(&c.adga, &exactly_one(var, &c.ann, self.edges.clone()))?
        };
        let narrower = self.ann(c.ann.vars.iter().filter(|v| *v != var).cloned());
        debug_assert_eq!(narrower.vars.len() + 1, c.ann.vars.len(), "bit {bit}");
        let h = Projection::new(
            c.ann.alphabet(),
            narrower.alphabet(),
            (0..c.ann.len()).map(|s| c.ann.restrict(s, &narrower)).collect(),
        )
        .expect("restriction is a total map");
        Ok(Compiled { adga: project(&inner, &h)?, ann: narrower })
    }

    fn compile(&self, f: &Formula) -> Result<Compiled, MsoError> {
        Ok(match f {
            Formula::True => self.constant(true),
            Formula::False => self.constant(false),
            Formula::Lab { label, x } => {
                let ann = self.ann([x.clone()]);
                self.local(ann, |a, mask| mask == 0 || a == *label)
            }
            Formula::Eq(x, y) => {
                let ann = self.ann([x.clone(), y.clone()]);
                let (bx, by) = (1 << ann.bit(x).expect("x"), 1 << ann.bit(y).expect("y"));
                self.local(ann, |_, mask| (mask & bx == 0) == (mask & by == 0))
            }
            Formula::In(x, s) => {
                let ann = self.ann([x.clone(), s.clone()]);
                let (bx, bs) = (1 << ann.bit(x).expect("x"), 1 << ann.bit(s).expect("set"));
                self.local(ann, |_, mask| mask & bx == 0 || mask & bs != 0)
            }
            Formula::Edge { symbol, x, y } => self.edge(*symbol, x, y),
            Formula::Not(g) => self.negate(self.compile(g)?),
            Formula::And(gs) | Formula::Or(gs) => {
                let conj = matches!(f, Formula::And(_));
                let mut acc = self.compile(&gs[0])?;
                for g in &gs[1..] {
                    let next = self.compile(g)?;
                    acc = if conj {
                        self.binary(&acc, &next, intersect_adga)?
                    } else {
                        self.binary(&acc, &next, union)?
                    };
                }
                acc
            }
            Formula::Implies(a, b) => {
                let a = self.negate(self.compile(a)?);
                self.binary(&a, &self.compile(b)?, union)?
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                let both = self.binary(&a, &b, intersect_adga)?;
                let (na, nb) = (self.negate(a), self.negate(b));
                let neither = self.binary(&na, &nb, intersect_adga)?;
                self.binary(&both, &neither, union)?
            }
            Formula::Exists(v, g) => {
                let body = self.compile(g)?;
                self.exists(v, body)?
            }
            Formula::Forall(v, g) => {
                let body = self.negate(self.compile(g)?);
                self.negate(self.exists(v, body)?)
            }
        })
    }
}

/// An automaton over Σ × 2^free(φ) accepting `G_{λ×α⁻¹}` iff `⟨G_λ, α⟩ ⊨ φ`,
/// where the annotation alphabet is [`AnnotatedAlphabet::new`] over the
/// free variables. For sentences the node alphabet is Σ itself.
pub fn compile_mso(phi: &MsoFormula) -> Result<Adga, MsoError> {
    let c = Compiler { nodes: &phi.alphabets.nodes, edges: &phi.alphabets.edges };
    Ok(c.compile(&phi.formula)?.adga)
}

/// Accepts an annotated graph iff exactly one node carries `x`.
///
/// Each `x`-marked node splits universally into two markers; every branch
/// must see exactly one marker.
pub fn exactly_one(x: &str, ann: &AnnotatedAlphabet, edges: Alphabet) -> Adga {
    let bit = 1 << ann.bit(x).expect("x is one of the annotation variables");
    let mut b = AdgaBuilder::new(Alphabets::new(ann.alphabet(), edges));
    let marked = b.declare("marked", Kind::Universal);
    let unmarked = b.declare("unmarked", Kind::Universal);
    let m1 = b.declare("m1", Kind::Permanent);
    let m2 = b.declare("m2", Kind::Permanent);
    let none = b.declare("none", Kind::Permanent);
    for s in 0..ann.len() {
        b.init(s, if ann.split(s).1 & bit != 0 { marked } else { unmarked });
    }
    b.rule(marked, BoolExpr::t(), [m1, m2]);
    b.rule(unmarked, BoolExpr::t(), [none]);
    let (o1, o2) = (BoolExpr::atom(m1), BoolExpr::atom(m2));
    b.accept(BoolExpr::or([
        BoolExpr::and([o1.clone(), BoolExpr::not(o2.clone())]),
        BoolExpr::and([BoolExpr::not(o1), o2]),
    ]));
    b.build().expect("valid marker automaton")
}
