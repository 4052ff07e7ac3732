//! Length normalization: every run reaches permanence exactly at round `L`.

use std::collections::VecDeque;

use super::bdd::satisfiable;
use super::{contains, Adga, AdgaBuilder, BoolExpr, Guard, Kind, StateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot synchronize an automaton of length {length} to length {requested}")]
pub struct TooShort {
    pub length: usize,
    pub requested: usize,
}

/// Removes states unreachable from the initial states.
///
/// At least one permanent state is always kept.
pub fn trim(a: &Adga) -> Adga {
    let n = a.state_count();
    let mut seen = vec![false; n];
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for &q in a.inits() {
        if !seen[q] {
            seen[q] = true;
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        for r in a.rules_from(q).filter(|r| !r.guard.is_const(false)) {
            for &t in &r.targets {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    if !(0..n).any(|q| seen[q] && a.kind(q) == Kind::Permanent) {
        let p = a.permanent_states()[0];
        seen[p] = true;
    }
    if seen.iter().all(|&s| s) {
        return a.clone();
    }
    let mut b = AdgaBuilder::new(a.alphabets().clone());
    let mut map = vec![None; n];
    for q in (0..n).filter(|&q| seen[q]) {
        map[q] = Some(b.declare(a.name(q), a.kind(q)));
    }
    for (label, &q) in a.inits().iter().enumerate() {
        b.init(label, map[q].expect("initial states are reachable"));
    }
    for r in a.rules() {
        let Some(src) = map[r.source] else { continue };
        if r.guard.is_const(false) {
            continue;
        }
        let guard = r.guard.map_atoms(&mut |&(g, s)| match map[s] {
            Some(s) => contains(g, s),
            None => BoolExpr::f(),
        });
        b.rule(src, guard, r.targets.iter().map(|&t| map[t].expect("targets of reachable rules")));
    }
    b.accept(a.accepting().map_atoms(&mut |&p| match map[p] {
        Some(p) => BoolExpr::atom(p),
        None => BoolExpr::f(),
    }));
    b.build().expect("trimming preserves validity")
}

/// An automaton of length `len` with the same language, in which every
/// nonpermanent state has a successor for every received family and
/// permanent states are entered only in round `len`.
///
/// Early entries into a permanent state `p` wait in states `p@j`. A state
/// that would be stuck enters a chain ending in the permanent state
/// `dead<i>`, where `i` is the round of the stuck configuration; the
/// earliest dead state in the final configuration decides acceptance
/// (accept iff it was stuck on a universal level).
pub fn synchronize(a: &Adga, len: usize) -> Result<Adga, TooShort> {
    if len < a.length() {
        return Err(TooShort {
            length: a.length(),
            requested: len,
        });
    }
    if len == 0 {
        return Ok(a.clone());
    }
    let n = a.state_count();
    let kinds: Vec<Kind> = (0..len)
        .map(|j| a.level_kind(j).unwrap_or(Kind::Existential))
        .collect();

    // Earliest round at which each permanent state can be entered.
    let mut entry = vec![len; n];
    for &q in a.inits() {
        if a.kind(q) == Kind::Permanent {
            entry[q] = 0;
        }
    }
    for r in a.rules() {
        for &t in &r.targets {
            if a.kind(t) == Kind::Permanent {
                entry[t] = entry[t].min(a.level(r.source) + 1);
            }
        }
    }

    let mut b = AdgaBuilder::new(a.alphabets().clone());
    let map: Vec<StateId> = (0..n).map(|q| b.declare(a.name(q), a.kind(q))).collect();
    // wait[p][j] for entry[p] <= j < len.
    let mut wait: Vec<Vec<Option<StateId>>> = vec![vec![None; len]; n];
    for p in (0..n).filter(|&p| a.kind(p) == Kind::Permanent) {
        for j in entry[p]..len {
            wait[p][j] = Some(b.state(format!("{}@{j}", a.name(p)), kinds[j]));
        }
        for j in entry[p]..len {
            let next = if j + 1 == len { map[p] } else { wait[p][j + 1].expect("chain") };
            b.rule(wait[p][j].expect("chain"), BoolExpr::t(), [next]);
        }
    }
    let enter_perm = |p: StateId, j: usize| if j == len { map[p] } else { wait[p][j].expect("entry computed") };
    for (label, &q) in a.inits().iter().enumerate() {
        let s = if a.kind(q) == Kind::Permanent { enter_perm(q, 0) } else { map[q] };
        b.init(label, s);
    }

    // (round, kind of the stuck level, permanent dead state, chain head)
    let mut dead: Vec<(usize, Kind, StateId, StateId)> = Vec::new();
    for q in (0..n).filter(|&q| a.kind(q) != Kind::Permanent) {
        let i = a.level(q);
        let mut guards = Vec::new();
        for r in a.rules_from(q) {
            let guard: Guard = r.guard.map_atoms(&mut |&(g, s)| {
                if a.kind(s) == Kind::Permanent {
                    match wait[s][i] {
                        Some(w) => contains(g, w),
                        None => BoolExpr::f(),
                    }
                } else if a.level(s) == i {
                    contains(g, map[s])
                } else {
                    BoolExpr::f()
                }
            });
            if guard.is_const(false) {
                continue;
            }
            let targets: Vec<StateId> = r
                .targets
                .iter()
                .map(|&t| if a.kind(t) == Kind::Permanent { enter_perm(t, i + 1) } else { map[t] })
                .collect();
            guards.push(guard.clone());
            b.rule(map[q], guard, targets);
        }
        let stuck = BoolExpr::not(BoolExpr::or(guards));
        if !satisfiable(&stuck) {
            continue;
        }
        let head = match dead.iter().find(|d| d.0 == i) {
            Some(d) => d.3,
            None => {
                let d = b.state(format!("dead{i}"), Kind::Permanent);
                let mut next = d;
                for j in (i + 1..len).rev() {
                    let w = b.state(format!("dead{i}@{j}"), kinds[j]);
                    b.rule(w, BoolExpr::t(), [next]);
                    next = w;
                }
                dead.push((i, a.kind(q), d, next));
                next
            }
        };
        b.rule(map[q], stuck, [head]);
    }

    let original = a.accepting().map_atoms(&mut |&p| BoolExpr::atom(map[p]));
    let accept = if dead.is_empty() {
        original
    } else {
        dead.sort_by_key(|d| d.0);
        let none = BoolExpr::and(dead.iter().map(|d| BoolExpr::not(BoolExpr::atom(d.2))));
        let mut terms = vec![BoolExpr::and([none, original])];
        for (k, &(_, kind, d, _)) in dead.iter().enumerate() {
            if kind == Kind::Universal {
                let earlier = dead[..k].iter().map(|e| BoolExpr::not(BoolExpr::atom(e.2)));
                terms.push(BoolExpr::and(std::iter::once(BoolExpr::atom(d)).chain(earlier)));
            }
        }
        BoolExpr::or(terms)
    };
    b.accept(accept);
    let out = b.build().expect("synchronization preserves validity");
    Ok(trim(&out))
}
