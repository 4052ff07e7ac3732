//! Automata to sentences: the sentence states that the automaton wins the
//! game on the input graph.
//!
//! After synchronization every node is on level `i` in round `i`. Round `i`
//! (for `i ≥ 1`) is described by one set variable per level-`i` state,
//! holding the nodes in that state; round 0 is read off the labels.

use super::{Formula, MsoFormula};
use crate::automaton::{synchronize, Adga, Kind, StateId};

struct Encoder<'a> {
    a: &'a Adga,
    levels: Vec<Vec<StateId>>,
}

impl Encoder<'_> {
    fn var(&self, round: usize, q: StateId) -> String {
        format!("U{round}q{q}")
    }

    fn block(&self, round: usize) -> Vec<String> {
        self.levels[round].iter().map(|&q| self.var(round, q)).collect()
    }

    /// `node` is in state `q` in round `round`.
    fn holds(&self, round: usize, q: StateId, node: &str) -> Formula {
        if round == 0 {
            Formula::or(
                self.a
                    .inits()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &s)| s == q)
                    .map(|(label, _)| Formula::Lab { label, x: node.to_string() }),
            )
        } else {
            Formula::In(node.to_string(), self.var(round, q))
        }
    }

    fn successor(&self, i: usize) -> Formula {
        let next = &self.levels[i + 1];
        let v = || "v".to_string();
        let cover = Formula::or(next.iter().map(|&q| self.holds(i + 1, q, "v")));
        let mut disjoint = Vec::new();
        for (k, &q) in next.iter().enumerate() {
            for &r in &next[k + 1..] {
                disjoint.push(Formula::not(Formula::and([self.holds(i + 1, q, "v"), self.holds(i + 1, r, "v")])));
            }
        }
        let mut legal = Vec::new();
        for &q in &self.levels[i] {
            let options = self.a.rules_from(q).map(|r| {
                let guard = self.guard(i, &r.guard);
                let targets = Formula::or(r.targets.iter().map(|&t| self.holds(i + 1, t, "v")));
                Formula::and([guard, targets])
            });
            legal.push(Formula::implies(self.holds(i, q, "v"), Formula::or(options)));
        }
        Formula::forall([v()], Formula::and([cover, Formula::and(disjoint), Formula::and(legal)]))
    }

    fn guard(&self, i: usize, g: &crate::automaton::Guard) -> Formula {
        use crate::automaton::BoolExpr;
        match g {
            BoolExpr::Const(b) => {
                if *b {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            BoolExpr::Atom((gamma, s)) => {
                if self.a.level(*s) != i {
                    return Formula::False;
                }
                Formula::exists(
                    ["u".to_string()],
                    Formula::and([
                        Formula::Edge { symbol: *gamma, x: "u".into(), y: "v".into() },
                        self.holds(i, *s, "u"),
                    ]),
                )
            }
            BoolExpr::Not(e) => Formula::not(self.guard(i, e)),
            BoolExpr::And(es) => Formula::and(es.iter().map(|e| self.guard(i, e))),
            BoolExpr::Or(es) => Formula::or(es.iter().map(|e| self.guard(i, e))),
        }
    }

    fn win(&self, i: usize) -> Formula {
        let last = self.levels.len() - 1;
        if i == last {
            return self.final_condition(i);
        }
        let block = self.block(i + 1);
        let step = self.successor(i);
        let rest = self.win(i + 1);
        match self.a.level_kind(i) {
            Some(Kind::Universal) => Formula::forall(block, Formula::implies(step, rest)),
            _ => Formula::exists(block, Formula::and([step, rest])),
        }
    }

    fn final_condition(&self, round: usize) -> Formula {
        use crate::automaton::BoolExpr;
        fn go(e: &Encoder, round: usize, f: &BoolExpr<StateId>) -> Formula {
            match f {
                BoolExpr::Const(b) => {
                    if *b {
                        Formula::True
                    } else {
                        Formula::False
                    }
                }
                BoolExpr::Atom(p) => Formula::exists(["w".to_string()], e.holds(round, *p, "w")),
                BoolExpr::Not(g) => Formula::not(go(e, round, g)),
                BoolExpr::And(gs) => Formula::and(gs.iter().map(|g| go(e, round, g))),
                BoolExpr::Or(gs) => Formula::or(gs.iter().map(|g| go(e, round, g))),
            }
        }
        go(self, round, self.a.accepting())
    }
}

/// A sentence defining the language of `a`.
pub fn mso_of_adga(a: &Adga) -> MsoFormula {
    let synced = synchronize(a, a.length()).expect("an automaton synchronizes to its own length");
    let n = synced.length();
    let levels: Vec<Vec<StateId>> = (0..=n)
        .map(|i| {
            if i == n {
                synced.permanent_states()
            } else {
                synced.states_at_level(i)
            }
        })
        .collect();
    let e = Encoder { a: &synced, levels };
    MsoFormula::new(synced.alphabets().clone(), e.win(0))
}
