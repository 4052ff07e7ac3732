//! Closure constructions: complement, union, products, intersection and
//! projection of node labels.

use std::collections::HashMap;

use thiserror::Error;

use crate::automaton::{
    contains, synchronize, trim, AcceptCondition, Adga, AdgaBuilder, BoolExpr, Class, Guard, Kind, StateId,
};
use crate::graph::Projection;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("the automata are over different alphabets")]
    AlphabetMismatch,
    #[error("{0}")]
    ClassPrecondition(String),
    #[error("the projection's source alphabet differs from the automaton's node alphabet")]
    ProjectionDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    And,
    Or,
}

/// Recognizes the complement language. Deterministic automata keep their
/// transitions and negate the accepting condition; otherwise existential and
/// universal states are swapped as well.
pub fn complement(a: &Adga) -> Adga {
    let negated = BoolExpr::not(a.accepting().clone());
    if a.class() == Class::Ddga {
        return a.with_accepting(negated);
    }
    let mut b = AdgaBuilder::new(a.alphabets().clone());
    for s in a.states() {
        b.declare(s.name.clone(), s.kind.dual());
    }
    for (label, &q) in a.inits().iter().enumerate() {
        b.init(label, q);
    }
    for r in a.rules() {
        b.rule(r.source, r.guard.clone(), r.targets.iter().copied());
    }
    b.accept(negated);
    b.build().expect("dual automaton is valid")
}

fn same_alphabets(a1: &Adga, a2: &Adga) -> Result<(), ConstructionError> {
    if a1.alphabets() == a2.alphabets() {
        Ok(())
    } else {
        Err(ConstructionError::AlphabetMismatch)
    }
}

/// Per-level (kind, deterministic) profile of a synchronized automaton.
fn profile(a: &Adga) -> Vec<(Kind, bool)> {
    (0..a.length())
        .map(|j| (a.level_kind(j).unwrap_or(Kind::Existential), a.level_is_deterministic(j)))
        .collect()
}

/// A merged schedule step: which operands advance, and the merged level's kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    advance: [bool; 2],
    kind: Kind,
}

/// Shortest interleaving of two level profiles in which every merged level
/// has one kind. A deterministic level or a waiting operand adapts to
/// either kind.
fn align(p: [&[(Kind, bool)]; 2]) -> Vec<Step> {
    let (n1, n2) = (p[0].len(), p[1].len());
    let forced = |x: (Kind, bool)| if x.1 { None } else { Some(x.0) };
    let merge = |a: Option<Kind>, b: Option<Kind>| match (a, b) {
        (Some(x), Some(y)) if x != y => None,
        (Some(x), _) | (_, Some(x)) => Some(Some(x)),
        (None, None) => Some(None),
    };
    // best[i][j]: shortest merge of p1[i..] and p2[j..].
    let mut best = vec![vec![usize::MAX; n2 + 1]; n1 + 1];
    for i in (0..=n1).rev() {
        for j in (0..=n2).rev() {
            if i == n1 && j == n2 {
                best[i][j] = 0;
                continue;
            }
            let mut v = usize::MAX;
            if i < n1 && j < n2 && merge(forced(p[0][i]), forced(p[1][j])).is_some() {
                v = v.min(1 + best[i + 1][j + 1]);
            }
            if i < n1 {
                v = v.min(1 + best[i + 1][j]);
            }
            if j < n2 {
                v = v.min(1 + best[i][j + 1]);
            }
            best[i][j] = v;
        }
    }
    let mut steps = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n1 || j < n2 {
        let kind = |k: Option<Kind>| k.unwrap_or(Kind::Existential);
        if i < n1 && j < n2 {
            if let Some(k) = merge(forced(p[0][i]), forced(p[1][j])) {
                if best[i][j] == 1 + best[i + 1][j + 1] {
                    steps.push(Step { advance: [true, true], kind: kind(k) });
                    i += 1;
                    j += 1;
                    continue;
                }
            }
        }
        if i < n1 && best[i][j] == 1 + best[i + 1][j] {
            steps.push(Step { advance: [true, false], kind: kind(forced(p[0][i])) });
            i += 1;
        } else {
            steps.push(Step { advance: [false, true], kind: kind(forced(p[1][j])) });
            j += 1;
        }
    }
    steps
}

/// Recognizes `L(a1) ∪ L(a2)`.
///
/// In the first round every node picks one operand and moves to that
/// operand's initial state for its label, tagged with the operand. The two
/// operands then run on interleaved schedules (one waits while the other
/// takes a level of a kind the other cannot share) and acceptance requires
/// all nodes to carry the same tag and that operand's condition to hold.
pub fn union(a1: &Adga, a2: &Adga) -> Result<Adga, ConstructionError> {
    same_alphabets(a1, a2)?;
    let ops = [
        synchronize(a1, a1.length()).expect("own length"),
        synchronize(a2, a2.length()).expect("own length"),
    ];
    let profiles = [profile(&ops[0]), profile(&ops[1])];
    let steps = align([&profiles[0], &profiles[1]]);
    let k_len = steps.len();

    let mut b = AdgaBuilder::new(a1.alphabets().clone());
    let labels: Vec<StateId> = a1
        .alphabets()
        .nodes
        .symbols()
        .iter()
        .map(|s| b.state(format!("choose_{s}"), Kind::Existential))
        .collect();

    // id[t][(q, m)] for merged levels m = 1..=k_len; permanent copies at k_len + 1.
    let mut ids: [HashMap<(StateId, usize), StateId>; 2] = [HashMap::new(), HashMap::new()];
    for (t, op) in ops.iter().enumerate() {
        let mut level = 0;
        for m in 1..=k_len + 1 {
            for q in 0..op.state_count() {
                let at_level = if op.kind(q) == Kind::Permanent {
                    level >= op.length()
                } else {
                    op.level(q) == level
                };
                if !at_level {
                    continue;
                }
                let kind = if m == k_len + 1 {
                    Kind::Permanent
                } else {
                    steps[m - 1].kind
                };
                let name = format!("{}:{}@{}", t + 1, op.name(q), m);
                ids[t].insert((q, m), b.state(name, kind));
            }
            if m <= k_len && steps[m - 1].advance[t] {
                level += 1;
            }
        }
    }

    for (a, &l) in labels.iter().enumerate() {
        b.init(a, l);
        let targets: Vec<StateId> = (0..2).map(|t| ids[t][&(ops[t].init(a), 1)]).collect();
        b.rule(l, BoolExpr::t(), targets);
    }
    for (t, op) in ops.iter().enumerate() {
        for m in 1..=k_len {
            let here: Vec<StateId> = (0..op.state_count()).filter(|&q| ids[t].contains_key(&(q, m))).collect();
            for q in here {
                let src = ids[t][&(q, m)];
                let wait = !steps[m - 1].advance[t] || op.kind(q) == Kind::Permanent;
                if wait {
                    b.rule(src, BoolExpr::t(), [ids[t][&(q, m + 1)]]);
                    continue;
                }
                for r in op.rules_from(q) {
                    let guard: Guard = r.guard.map_atoms(&mut |&(g, s)| match ids[t].get(&(s, m)) {
                        Some(&s) => contains(g, s),
                        None => BoolExpr::f(),
                    });
                    let targets: Vec<StateId> = r.targets.iter().map(|&x| ids[t][&(x, m + 1)]).collect();
                    b.rule(src, guard, targets);
                }
            }
        }
    }

    let final_level = k_len + 1;
    let mut branches = Vec::new();
    for (t, op) in ops.iter().enumerate() {
        let other = 1 - t;
        let no_other = BoolExpr::and(
            ops[other]
                .permanent_states()
                .into_iter()
                .map(|p| BoolExpr::not(BoolExpr::atom(ids[other][&(p, final_level)]))),
        );
        let cond: AcceptCondition = op.accepting().map_atoms(&mut |&p| BoolExpr::atom(ids[t][&(p, final_level)]));
        branches.push(BoolExpr::and([no_other, cond]));
    }
    b.accept(BoolExpr::or(branches));
    Ok(trim(&b.build().expect("union construction is valid")))
}

/// Level-wise product of two automata of the same kind pattern.
///
/// `And` requires two NDGAs; `Or` requires two deterministic automata,
/// since the combined condition is only sound when each run is unique.
pub fn product(a1: &Adga, a2: &Adga, combine: Combine) -> Result<Adga, ConstructionError> {
    same_alphabets(a1, a2)?;
    match combine {
        Combine::And if !(a1.is_ndga() && a2.is_ndga()) => {
            return Err(ConstructionError::ClassPrecondition(
                "the AND product needs two automata without universal states".into(),
            ))
        }
        Combine::Or if a1.class() != Class::Ddga || a2.class() != Class::Ddga => {
            return Err(ConstructionError::ClassPrecondition(
                "the OR product needs two syntactically deterministic automata".into(),
            ))
        }
        _ => {}
    }
    let len = a1.length().max(a2.length());
    let ops = [synchronize(a1, len).expect("long enough"), synchronize(a2, len).expect("long enough")];
    let mut b = AdgaBuilder::new(a1.alphabets().clone());
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let declare = |b: &mut AdgaBuilder, ids: &mut HashMap<(StateId, StateId), StateId>, pair: (StateId, StateId)| {
        *ids.entry(pair).or_insert_with(|| {
            let name = format!("<{};{}>", ops[0].name(pair.0), ops[1].name(pair.1));
            b.state(name, ops[0].kind(pair.0))
        })
    };
    let mut level: Vec<(StateId, StateId)> = Vec::new();
    for a in 0..a1.alphabets().nodes.len() {
        let pair = (ops[0].init(a), ops[1].init(a));
        let id = declare(&mut b, &mut ids, pair);
        b.init(a, id);
        if !level.contains(&pair) {
            level.push(pair);
        }
    }
    for _ in 0..len {
        let mut next: Vec<(StateId, StateId)> = Vec::new();
        for &(q1, q2) in &level {
            let src = ids[&(q1, q2)];
            // contains(γ, s) on one side holds iff some received pair has s on that side.
            let rewrite = |g: &Guard, side: usize, ids: &HashMap<(StateId, StateId), StateId>| -> Guard {
                g.map_atoms(&mut |&(gamma, s)| {
                    BoolExpr::or(
                        level
                            .iter()
                            .filter(|pair| if side == 0 { pair.0 == s } else { pair.1 == s })
                            .map(|pair| contains(gamma, ids[pair])),
                    )
                })
            };
            for r1 in ops[0].rules_from(q1) {
                let g1 = rewrite(&r1.guard, 0, &ids);
                if g1.is_const(false) {
                    continue;
                }
                for r2 in ops[1].rules_from(q2) {
                    let guard = BoolExpr::and([g1.clone(), rewrite(&r2.guard, 1, &ids)]);
                    if guard.is_const(false) {
                        continue;
                    }
                    let mut targets = Vec::new();
                    for &t1 in &r1.targets {
                        for &t2 in &r2.targets {
                            targets.push(declare(&mut b, &mut ids, (t1, t2)));
                            if !next.contains(&(t1, t2)) {
                                next.push((t1, t2));
                            }
                        }
                    }
                    b.rule(src, guard, targets);
                }
            }
        }
        level = next;
    }
    let finals = level;
    let occurs = |side: usize, p: StateId| {
        BoolExpr::or(
            finals
                .iter()
                .filter(|pair| if side == 0 { pair.0 == p } else { pair.1 == p })
                .map(|pair| BoolExpr::atom(ids[pair])),
        )
    };
    let c1 = ops[0].accepting().map_atoms(&mut |&p| occurs(0, p));
    let c2 = ops[1].accepting().map_atoms(&mut |&p| occurs(1, p));
    b.accept(match combine {
        Combine::And => BoolExpr::and([c1, c2]),
        Combine::Or => BoolExpr::or([c1, c2]),
    });
    Ok(trim(&b.build().expect("product construction is valid")))
}

/// Recognizes `L(a1) ∩ L(a2)` for arbitrary automata, by De Morgan.
pub fn intersect_adga(a1: &Adga, a2: &Adga) -> Result<Adga, ConstructionError> {
    Ok(complement(&union(&complement(a1), &complement(a2))?))
}

/// Recognizes `h(L(a))`: in a new first round every node guesses a preimage
/// of its label and continues as `a` would from that label.
pub fn project(a: &Adga, h: &Projection) -> Result<Adga, ConstructionError> {
    if h.source != a.alphabets().nodes {
        return Err(ConstructionError::ProjectionDomain);
    }
    let s = synchronize(a, a.length()).expect("own length");
    let mut b = AdgaBuilder::new(crate::graph::Alphabets::new(h.target.clone(), a.alphabets().edges.clone()));
    for st in s.states() {
        b.declare(st.name.clone(), st.kind);
    }
    for r in s.rules() {
        b.rule(r.source, r.guard.clone(), r.targets.iter().copied());
    }
    for (bl, sym) in h.target.symbols().iter().enumerate() {
        let l = b.state(format!("guess_{sym}"), Kind::Existential);
        b.init(bl, l);
        let targets: Vec<StateId> = h.preimages(bl).map(|a| s.init(a)).collect();
        if !targets.is_empty() {
            b.rule(l, BoolExpr::t(), targets);
        }
    }
    b.accept(s.accepting().clone());
    Ok(trim(&b.build().expect("projection construction is valid")))
}
