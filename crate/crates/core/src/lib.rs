//! Distributed graph automata: alternating, nondeterministic and
//! deterministic automata running synchronously on labeled graphs, their
//! closure constructions and decision procedures, translations to and from
//! monadic second-order logic, and a Hoare-style verifier for a
//! round-synchronous programming language.

pub mod automaton;
pub mod cli;
pub mod constructions;
pub mod decision;
pub mod dpl;
pub mod graph;
pub mod hoare;
pub mod mso;
