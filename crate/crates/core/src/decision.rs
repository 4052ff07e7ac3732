//! Emptiness, inclusion and equivalence by bounded search over graphs.
//!
//! Emptiness of nondeterministic automata reduces to a finite search: a
//! nonempty language contains a graph whose size is bounded in terms of the
//! number of states and the length. The bound is computed exactly but is
//! astronomically large for all but tiny automata, so searches are capped
//! and report whether the cap reached the bound.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::automaton::bdd::satisfiable;
use crate::automaton::{Adga, BoolExpr, Class, Kind};
use crate::constructions::{complement, product, Combine};
use crate::graph::{enumerate_graphs, EnumMode, EnumOptions, LabeledGraph};

pub const DEFAULT_CAP: usize = 6;

/// Bounds wider than this many bits are reported as [`Bound::Overflow`].
pub const BOUND_BIT_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error(
        "emptiness is only decidable for nondeterministic automata; this one is {0} \
         (alternating automata have an undecidable emptiness problem; a bounded probe is available)"
    )]
    NotNondeterministic(Class),
    #[error("inclusion needs deterministic automata, got {0}")]
    NotDeterministic(Class),
    #[error("the automata have different alphabets")]
    AlphabetMismatch,
    #[error("the node cap must be at least 1")]
    ZeroCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Value(BigUint),
    Overflow,
}

impl Bound {
    /// Whether every graph size up to the bound is within `n`.
    pub fn within(&self, n: usize) -> bool {
        match self {
            Bound::Value(b) => *b <= BigUint::from(n),
            Bound::Overflow => false,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Value(b) => write!(f, "{b}"),
            Bound::Overflow => write!(f, "overflow"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Counterexample(LabeledGraph),
    /// Nothing accepted among graphs with up to `n_checked` nodes; `exact`
    /// when that reaches the size bound, so the language is empty.
    EmptyUpTo { n_checked: usize, exact: bool },
}

fn base_and_exponent(a: &Adga, mode: EnumMode) -> (BigUint, u64) {
    let q = a.state_count() as u64;
    let exponent = a.length() as u64 + 1;
    let base = match mode {
        EnumMode::AllDirected => BigUint::from(q),
        EnumMode::ConnectedUndirected => {
            let gamma = a.alphabets().edges.len() as u64;
            BigUint::from(q) << (gamma * q)
        }
    };
    (base, exponent)
}

fn require_ndga(a: &Adga) -> Result<(), DecisionError> {
    match a.class() {
        Class::Adga => Err(DecisionError::NotNondeterministic(Class::Adga)),
        _ => Ok(()),
    }
}

/// Number of nodes that suffices to find a member of a nonempty language:
/// `|Q|^(len+1)` for all graphs, `(|Q|·2^(|Γ|·|Q|))^(len+1)` for connected
/// undirected ones.
pub fn emptiness_bound(a: &Adga, mode: EnumMode) -> Result<Bound, DecisionError> {
    emptiness_bound_within(a, mode, BOUND_BIT_LIMIT)
}

/// [`emptiness_bound`] with a custom overflow threshold in bits.
pub fn emptiness_bound_within(a: &Adga, mode: EnumMode, bit_limit: u64) -> Result<Bound, DecisionError> {
    require_ndga(a)?;
    let (base, exponent) = base_and_exponent(a, mode);
    if base.bits().saturating_mul(exponent) > bit_limit {
        return Ok(Bound::Overflow);
    }
    let exponent = u32::try_from(exponent).expect("exponent fits after the size check");
    Ok(Bound::Value(base.pow(exponent)))
}

/// Labels worth trying in a search: one per initial state, skipping states
/// from which every run ends in a permanent state whose occurrence alone
/// makes the acceptance condition false. Only used for automata without
/// universal states, where a node's run is a single chain of choices.
pub fn search_labels(a: &Adga) -> Vec<usize> {
    let n = a.state_count();
    let mut doomed = vec![false; n];
    if a.is_ndga() {
        for p in a.permanent_states() {
            let forced = a.accepting().map_atoms(&mut |&q| if q == p { BoolExpr::t() } else { BoolExpr::atom(q) });
            doomed[p] = !satisfiable(&forced);
        }
        for level in (0..a.length()).rev() {
            for q in a.states_at_level(level) {
                if a.kind(q) != Kind::Permanent {
                    doomed[q] = a.rules_from(q).all(|r| r.targets.iter().all(|&t| doomed[t]));
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for (label, &q) in a.inits().iter().enumerate() {
        if !doomed[q] && !seen[q] {
            seen[q] = true;
            out.push(label);
        }
    }
    out
}

fn search(a: &Adga, opts: EnumOptions, n_max: usize) -> Option<LabeledGraph> {
    let labels = search_labels(a);
    if labels.is_empty() {
        return None;
    }
    enumerate_graphs(labels.len(), a.alphabets().edges.len(), n_max, opts)
        .map(|g| LabeledGraph { labels: g.labels.iter().map(|&l| labels[l]).collect(), graph: g.graph })
        .find(|g| a.accepts(g))
}

/// The smallest accepted graph with at most `min(n_cap, bound)` nodes.
///
/// Accepts an [`EnumMode`] or full [`EnumOptions`]; isomorphism dedup is
/// always sound here since acceptance is invariant under isomorphism.
pub fn find_member(a: &Adga, opts: impl Into<EnumOptions>, n_cap: usize) -> Result<SearchOutcome, DecisionError> {
    let opts = opts.into();
    let mode = opts.mode;
    if n_cap == 0 {
        return Err(DecisionError::ZeroCap);
    }
    let bound = emptiness_bound(a, mode)?;
    let (n_max, exact) = match &bound {
        Bound::Value(b) if *b <= BigUint::from(n_cap) => {
            (usize::try_from(b).expect("at most n_cap").max(1), true)
        }
        _ => (n_cap, false),
    };
    Ok(match search(a, opts, n_max) {
        Some(g) => SearchOutcome::Counterexample(g),
        None => SearchOutcome::EmptyUpTo { n_checked: n_max, exact },
    })
}

/// Searches any automaton for a member with up to `n_cap` nodes. A negative
/// answer is never exact.
pub fn bounded_probe(a: &Adga, opts: impl Into<EnumOptions>, n_cap: usize) -> Result<SearchOutcome, DecisionError> {
    if n_cap == 0 {
        return Err(DecisionError::ZeroCap);
    }
    Ok(match search(a, opts.into(), n_cap) {
        Some(g) => SearchOutcome::Counterexample(g),
        None => SearchOutcome::EmptyUpTo { n_checked: n_cap, exact: false },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    Holds { n_checked: usize, exact: bool },
    /// A graph accepted by the first automaton and rejected by the second.
    Violation(LabeledGraph),
}

fn require_ddga(a: &Adga) -> Result<(), DecisionError> {
    match a.class() {
        Class::Ddga => Ok(()),
        c => Err(DecisionError::NotDeterministic(c)),
    }
}

/// Whether L(a1) ⊆ L(a2), by searching the product of `a1` with the complement of `a2`.
pub fn inclusion_ddga(a1: &Adga, a2: &Adga, opts: impl Into<EnumOptions>, n_cap: usize) -> Result<Inclusion, DecisionError> {
    require_ddga(a1)?;
    require_ddga(a2)?;
    if a1.alphabets() != a2.alphabets() {
        return Err(DecisionError::AlphabetMismatch);
    }
    let diff = product(a1, &complement(a2), Combine::And).expect("deterministic operands over equal alphabets");
    Ok(match find_member(&diff, opts, n_cap)? {
        SearchOutcome::Counterexample(g) => Inclusion::Violation(g),
        SearchOutcome::EmptyUpTo { n_checked, exact } => Inclusion::Holds { n_checked, exact },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent { exact: bool },
    Differs {
        only_first: Option<LabeledGraph>,
        only_second: Option<LabeledGraph>,
    },
}

pub fn equivalence_ddga(a1: &Adga, a2: &Adga, opts: impl Into<EnumOptions>, n_cap: usize) -> Result<Equivalence, DecisionError> {
    let opts = opts.into();
    let left = inclusion_ddga(a1, a2, opts, n_cap)?;
    let right = inclusion_ddga(a2, a1, opts, n_cap)?;
    Ok(match (left, right) {
        (Inclusion::Holds { exact: e1, .. }, Inclusion::Holds { exact: e2, .. }) => {
            Equivalence::Equivalent { exact: e1 && e2 }
        }
        (l, r) => {
            let witness = |i: Inclusion| match i {
                Inclusion::Violation(g) => Some(g),
                Inclusion::Holds { .. } => None,
            };
            Equivalence::Differs { only_first: witness(l), only_second: witness(r) }
        }
    })
}
