//! Finite multisets over the states of one automaton.
//!
//! Only nonzero multiplicities are stored; iteration is in ascending state
//! order, so everything downstream is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::automaton::{StateId, SubzeroAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisetError {
    #[error("port for state index {} not present", .0.index())]
    PortNotPresent(StateId),
}

/// A multiset over `{0, .., num_states - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    num_states: usize,
    counts: BTreeMap<StateId, u64>,
}

impl Multiset {
    pub fn empty(num_states: usize) -> Self {
        Self {
            num_states,
            counts: BTreeMap::new(),
        }
    }

    /// Multiset containing each listed state once per occurrence.
    pub fn from_states(num_states: usize, states: &[StateId]) -> Self {
        let mut w = Self::empty(num_states);
        for &q in states {
            w.add(q, 1);
        }
        w
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn count(&self, q: StateId) -> u64 {
        self.counts.get(&q).copied().unwrap_or(0)
    }

    /// Total number of elements, i.e. the sum of all multiplicities.
    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// States with nonzero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.counts.keys().copied()
    }

    /// `(state, multiplicity)` pairs, ascending by state.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, u64)> + '_ {
        self.counts.iter().map(|(&q, &c)| (q, c))
    }

    pub fn add(&mut self, q: StateId, k: u64) {
        debug_assert!(q.index() < self.num_states);
        if k > 0 {
            *self.counts.entry(q).or_insert(0) += k;
        }
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!(
            self.num_states, other.num_states,
            "multisets over different automata"
        );
    }

    /// Pointwise minimum. Panics if the multisets range over different
    /// state spaces.
    pub fn meet(&self, other: &Self) -> Self {
        self.check_same_space(other);
        let mut counts = BTreeMap::new();
        for (&q, &c) in &self.counts {
            let m = c.min(other.count(q));
            if m > 0 {
                counts.insert(q, m);
            }
        }
        Self {
            num_states: self.num_states,
            counts,
        }
    }

    /// Pointwise sum (additive union). Panics if the multisets range over
    /// different state spaces.
    pub fn sum(&self, other: &Self) -> Self {
        self.check_same_space(other);
        let mut result = self.clone();
        for (q, c) in other.iter() {
            result.add(q, c);
        }
        result
    }

    /// Removes one occurrence of `q`.
    pub fn remove_one(&self, q: StateId) -> Result<Self, MultisetError> {
        let c = self.count(q);
        if c == 0 {
            return Err(MultisetError::PortNotPresent(q));
        }
        let mut result = self.clone();
        if c == 1 {
            result.counts.remove(&q);
        } else {
            result.counts.insert(q, c - 1);
        }
        Ok(result)
    }

    /// Collapses every multiplicity to 1, keeping the support.
    pub fn dedup(&self) -> Self {
        Self {
            num_states: self.num_states,
            counts: self.support().map(|q| (q, 1)).collect(),
        }
    }

    /// Pointwise `self(q) <= other(q)` for all `q`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same_space(other);
        self.iter().all(|(q, c)| c <= other.count(q))
    }

    /// Renders like `{p, q, q}` using the automaton's state names.
    pub fn display(&self, a: &SubzeroAutomaton) -> String {
        let mut parts = Vec::new();
        for (q, c) in self.iter() {
            for _ in 0..c {
                parts.push(a.state_name(q).to_string());
            }
        }
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "{{")?;
        for (q, c) in self.iter() {
            for _ in 0..c {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{q}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}
