//! Subzero tree automata and the regular emptiness problem.
//!
//! A subzero automaton is a nondeterministic automaton on infinite binary
//! trees whose states carry a total priority order and two designated sets:
//! `Q_all` (every infinite branch must have its maximal recurring state
//! there) and `Q_zero` (the branches whose maximal recurring state lies
//! there must form a set of coin-flipping measure zero).
//!
//! The crate decides whether such an automaton accepts some *regular* tree.
//! The decision procedure works by saturating a deductive calculus of
//! *profiles* (root state, bound on inner states, multiset of open ports).
//! Derivations compile to finite run graphs, and an exact rational
//! Markov-chain solver checks the measure-zero acceptance condition on
//! those graphs. Brute-force oracles cross-validate every piece.

pub mod automaton;
pub mod bounds;
pub mod calculus;
pub mod cli;
pub mod engine;
pub mod examples;
pub mod format;
pub mod multiset;
pub mod oracle;
pub mod realizer;
pub mod runcheck;

pub use automaton::{LetterId, StateId, SubzeroAutomaton, Transition};
pub use calculus::{Derivation, Profile, Rule};
pub use engine::{NormalProfile, SaturationResult, Verdict};
pub use multiset::Multiset;
pub use realizer::{NodeId, RunGraph, RunNode};
