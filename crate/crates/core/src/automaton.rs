//! The automaton data model: states, letters, transitions, and the two
//! acceptance sets.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a state. States are identified with `0..|Q|` and the numeric
/// order on indices *is* the priority order: a larger index means a higher
/// priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Index of an input letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub usize);

impl LetterId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A single transition `(source, letter, left child, right child)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub letter: LetterId,
    pub left: StateId,
    pub right: StateId,
}

/// A subzero automaton.
///
/// State names are listed in ascending priority; their positions are the
/// `StateId`s. `q_all` and `q_zero` may overlap and may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubzeroAutomaton {
    state_names: Vec<String>,
    letter_names: Vec<String>,
    transitions: Vec<Transition>,
    q_all: BTreeSet<StateId>,
    q_zero: BTreeSet<StateId>,
}

/// A single invariant violation found by [`SubzeroAutomaton::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which field of the automaton the violation is in.
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Outcome of validating an automaton. Violations are data, not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Error raised when building an automaton from names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("unknown state name `{0}`")]
    UnknownState(String),
    #[error("unknown letter name `{0}`")]
    UnknownLetter(String),
}

impl SubzeroAutomaton {
    /// Builds an automaton from raw parts. No validation is performed;
    /// call [`validate`](Self::validate) to check the invariants.
    pub fn new(
        state_names: Vec<String>,
        letter_names: Vec<String>,
        transitions: Vec<Transition>,
        q_all: BTreeSet<StateId>,
        q_zero: BTreeSet<StateId>,
    ) -> Self {
        Self {
            state_names,
            letter_names,
            transitions,
            q_all,
            q_zero,
        }
    }

    /// Builds an automaton from symbolic names. The order of `states` is the
    /// priority order. Unknown names in transitions or the two acceptance
    /// sets are rejected.
    pub fn from_names(
        states: &[&str],
        letters: &[&str],
        transitions: &[(&str, &str, &str, &str)],
        q_all: &[&str],
        q_zero: &[&str],
    ) -> Result<Self, BuildError> {
        let state_names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let letter_names: Vec<String> = letters.iter().map(|s| s.to_string()).collect();
        let find_state = |name: &str| -> Result<StateId, BuildError> {
            state_names
                .iter()
                .position(|n| n == name)
                .map(StateId)
                .ok_or_else(|| BuildError::UnknownState(name.to_string()))
        };
        let find_letter = |name: &str| -> Result<LetterId, BuildError> {
            letter_names
                .iter()
                .position(|n| n == name)
                .map(LetterId)
                .ok_or_else(|| BuildError::UnknownLetter(name.to_string()))
        };
        let transitions = transitions
            .iter()
            .map(|(src, a, l, r)| {
                Ok(Transition {
                    source: find_state(src)?,
                    letter: find_letter(a)?,
                    left: find_state(l)?,
                    right: find_state(r)?,
                })
            })
            .collect::<Result<Vec<_>, BuildError>>()?;
        let q_all = q_all
            .iter()
            .map(|n| find_state(n))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let q_zero = q_zero
            .iter()
            .map(|n| find_state(n))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Self::new(
            state_names,
            letter_names,
            transitions,
            q_all,
            q_zero,
        ))
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letter_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.letter_names[a.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn letter_by_name(&self, name: &str) -> Option<LetterId> {
        self.letter_names
            .iter()
            .position(|n| n == name)
            .map(LetterId)
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letter_names
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn has_transition(&self, t: &Transition) -> bool {
        self.transitions.contains(t)
    }

    pub fn q_all(&self) -> &BTreeSet<StateId> {
        &self.q_all
    }

    pub fn q_zero(&self) -> &BTreeSet<StateId> {
        &self.q_zero
    }

    pub fn is_all(&self, q: StateId) -> bool {
        self.q_all.contains(&q)
    }

    pub fn is_zero(&self, q: StateId) -> bool {
        self.q_zero.contains(&q)
    }

    pub fn valid_state(&self, q: StateId) -> bool {
        q.0 < self.num_states()
    }

    pub fn valid_letter(&self, a: LetterId) -> bool {
        a.0 < self.num_letters()
    }

    /// Checks every structural invariant and reports each violation with the
    /// offending field and entry.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, name) in self.state_names.iter().enumerate() {
            if self.state_names[..i].contains(name) {
                violations.push(Violation {
                    field: "states",
                    message: format!("duplicate state name `{name}`"),
                });
            }
        }
        for (i, name) in self.letter_names.iter().enumerate() {
            if self.letter_names[..i].contains(name) {
                violations.push(Violation {
                    field: "alphabet",
                    message: format!("duplicate letter name `{name}`"),
                });
            }
        }
        for (set, field) in [(&self.q_all, "all"), (&self.q_zero, "zero")] {
            for &q in set {
                if !self.valid_state(q) {
                    violations.push(Violation {
                        field,
                        message: format!("unknown state index {}", q.0),
                    });
                }
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            for (q, part) in [(t.source, "source"), (t.left, "left"), (t.right, "right")] {
                if !self.valid_state(q) {
                    violations.push(Violation {
                        field: "trans",
                        message: format!("transition #{i}: unknown {part} state index {}", q.0),
                    });
                }
            }
            if !self.valid_letter(t.letter) {
                violations.push(Violation {
                    field: "trans",
                    message: format!("transition #{i}: unknown letter index {}", t.letter.0),
                });
            }
            if self.transitions[..i].contains(t) {
                violations.push(Violation {
                    field: "trans",
                    message: format!("transition #{i} duplicates an earlier one"),
                });
            }
        }
        ValidationReport { violations }
    }
}
