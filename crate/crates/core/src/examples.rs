//! Ready-made automata and the block-structured witness tree used to
//! demonstrate a nonempty language without regular members.

use num::BigRational;
use num::{BigInt, One, Zero};

use crate::automaton::{BuildError, SubzeroAutomaton};

/// A parity automaton presented as a subzero automaton: `Q_zero` is empty,
/// so only the `Q_all` condition is live.
pub fn make_parity(
    states: &[&str],
    alphabet: &[&str],
    q_all: &[&str],
    transitions: &[(&str, &str, &str, &str)],
) -> Result<SubzeroAutomaton, BuildError> {
    SubzeroAutomaton::from_names(states, alphabet, transitions, q_all, &[])
}

/// The two-state automaton accepting the trees whose all-`b` branches form
/// a measure-zero set. `bot` is a sink; the state order is `bot < q`.
pub fn make_example12() -> SubzeroAutomaton {
    SubzeroAutomaton::from_names(
        &["bot", "q"],
        &["a", "b"],
        &[
            ("q", "a", "bot", "bot"),
            ("q", "b", "q", "q"),
            ("bot", "a", "bot", "bot"),
            ("bot", "b", "bot", "bot"),
        ],
        &["bot", "q"],
        &["q"],
    )
    .expect("static automaton")
}

/// The three-state automaton for the language "every node reaches an `a`,
/// yet the branches seeing infinitely many `a`s have measure zero".
/// States in priority order: `E < R < T`; `Q_all = {R, T}`, `Q_zero = {T}`.
///
/// Its language is nonempty but contains no regular tree, so deciding
/// regular emptiness on it must answer `Empty` from every start state.
pub fn make_l3() -> SubzeroAutomaton {
    let mut transitions = Vec::new();
    for q in ["E", "R", "T"] {
        transitions.push((q, "a", "T", "T"));
        transitions.push((q, "b", "E", "R"));
        transitions.push((q, "b", "R", "E"));
    }
    SubzeroAutomaton::from_names(&["E", "R", "T"], &["a", "b"], &transitions, &["R", "T"], &["T"])
        .expect("static automaton")
}

/// A five-state fragment generating finite partial runs: `p` branches into
/// the inert port states `q1..q4` (and itself), and no acceptance set is
/// populated. Exercises derivations built from axioms and unifications only.
pub fn make_branching_fragment() -> SubzeroAutomaton {
    make_parity(
        &["p", "q1", "q2", "q3", "q4"],
        &["b"],
        &[],
        &[
            ("p", "b", "q1", "q1"),
            ("p", "b", "p", "q4"),
            ("p", "b", "p", "p"),
            ("p", "b", "q1", "q2"),
            ("p", "b", "q3", "q2"),
        ],
    )
    .expect("static automaton")
}

/// Depth boundaries `f(0), .., f(k)` splitting the tree into blocks.
/// Invariant: `f(0) = 0` and `f(n) > n + sum of all earlier values`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSchedule {
    values: Vec<u64>,
}

impl BlockSchedule {
    /// The minimal schedule: `f(n) = n + sum_{i<n} f(i) + 1`.
    pub fn minimal(blocks: usize) -> Self {
        assert!(blocks >= 1, "need at least one block");
        let mut values = vec![0u64];
        let mut sum = 0u64;
        for n in 1..=blocks as u64 {
            let f = n + sum + 1;
            values.push(f);
            sum += f;
        }
        Self { values }
    }

    /// Builds a schedule from explicit values, checking the invariant.
    pub fn from_values(values: Vec<u64>) -> Option<Self> {
        if values.first() != Some(&0) || values.len() < 2 {
            return None;
        }
        let mut sum = 0u64;
        for (n, &f) in values.iter().enumerate().skip(1) {
            if f <= n as u64 + sum {
                return None;
            }
            sum += f;
        }
        Some(Self { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Number of blocks, i.e. `k` for values `f(0), .., f(k)`.
    pub fn blocks(&self) -> usize {
        self.values.len() - 1
    }

    /// The depth differences `f(n+1) - f(n)`.
    pub fn gaps(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// Re-checks the strict growth invariant.
    pub fn satisfies_invariant(&self) -> bool {
        Self::from_values(self.values.clone()).is_some()
    }
}

/// See [`BlockSchedule::minimal`].
pub fn l3_block_schedule(blocks: usize) -> BlockSchedule {
    BlockSchedule::minimal(blocks)
}

/// Direction taken from a node to a child.
pub type Path = [bool];

/// A finite prefix (levels `0..=f(k)`) of the block-labeled tree: within
/// block `n` (depths `f(n) <= d < f(n+1)`) a node is labeled `a` exactly
/// when it lies on the leftmost chain descending from its ancestor at
/// depth `f(n)`; every other node is labeled `b`.
///
/// Labels are computed on demand; a full level has `2^d` nodes, so callers
/// materialize levels only for small schedules.
#[derive(Debug, Clone)]
pub struct WitnessPrefix {
    schedule: BlockSchedule,
}

impl WitnessPrefix {
    pub fn schedule(&self) -> &BlockSchedule {
        &self.schedule
    }

    /// Deepest level of the prefix, `f(k)`.
    pub fn depth(&self) -> u64 {
        *self.schedule.values.last().expect("nonempty schedule")
    }

    /// Index of the block owning depth `d`: the largest `n` with
    /// `f(n) <= d`.
    pub fn block_of(&self, d: u64) -> usize {
        match self.schedule.values.binary_search(&d) {
            Ok(n) => n,
            Err(ins) => ins - 1,
        }
    }

    /// Whether the node reached by `path` (true = right) is labeled `a`.
    /// Panics if the path is longer than the prefix depth.
    pub fn is_a(&self, path: &Path) -> bool {
        let d = path.len() as u64;
        assert!(d <= self.depth(), "path leaves the prefix");
        let entry = self.schedule.values[self.block_of(d)];
        path[entry as usize..].iter().all(|&right| !right)
    }

    /// Labels of one full level, left to right; `true` means `a`.
    pub fn level(&self, d: u64) -> Vec<bool> {
        assert!(d <= self.depth());
        let mut out = Vec::with_capacity(1 << d);
        let mut path = vec![false; d as usize];
        loop {
            out.push(self.is_a(&path));
            // Binary increment over the path bits.
            let mut i = path.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if !path[i] {
                    path[i] = true;
                    break;
                }
                path[i] = false;
            }
        }
    }
}

/// The labeled prefix for a schedule.
pub fn l3_witness_prefix(schedule: BlockSchedule) -> WitnessPrefix {
    WitnessPrefix { schedule }
}

/// The partial sum `sum_{n<k} 2^-(f(n+1)-f(n))` as an exact rational,
/// together with whether it is at most one. Staying at most one is what
/// keeps the branches following a full block chain summable.
pub fn l3_measure_bound(schedule: &BlockSchedule) -> (BigRational, bool) {
    let mut sum = BigRational::zero();
    for gap in schedule.gaps() {
        let denom = BigInt::one() << gap;
        sum += BigRational::new(BigInt::one(), denom);
    }
    let ok = sum <= BigRational::one();
    (sum, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn l3_shape() {
        let a = make_l3();
        assert_eq!(a.transitions().len(), 9);
        assert!(a.validate().is_ok());
        assert_eq!(a.state_names(), &["E", "R", "T"]);
    }

    #[test]
    fn example12_shape() {
        let a = make_example12();
        assert!(a.validate().is_ok());
        assert_eq!(a.q_zero().len(), 1);
        assert!(a.is_zero(a.state_by_name("q").unwrap()));
        assert_eq!(a.q_all().len(), 2);
    }

    #[test]
    fn minimal_schedule_values() {
        let s = BlockSchedule::minimal(3);
        assert_eq!(s.values(), &[0, 2, 5, 11]);
        assert!(s.satisfies_invariant());
        // f(1) must exceed 1 + f(0) = 1, and 2 is the least such value.
        assert_eq!(s.values()[1], 2);
    }

    #[test]
    fn schedules_hold_invariant_up_to_twenty() {
        for k in 1..=20 {
            assert!(BlockSchedule::minimal(k).satisfies_invariant(), "k={k}");
        }
        assert!(BlockSchedule::from_values(vec![0, 1]).is_none());
        assert!(BlockSchedule::from_values(vec![0, 2, 4]).is_none());
        assert!(BlockSchedule::from_values(vec![0, 2, 5]).is_some());
    }

    #[test]
    fn measure_bound_examples() {
        let (sum, ok) = l3_measure_bound(&BlockSchedule::from_values(vec![0, 2, 5]).unwrap());
        assert_eq!(sum, BigRational::new(3.into(), 8.into()));
        assert!(ok);

        let (sum, ok) = l3_measure_bound(&BlockSchedule::minimal(3));
        assert_eq!(sum, BigRational::new(25.into(), 64.into()));
        assert!(ok);

        let (sum, ok) = l3_measure_bound(&BlockSchedule::minimal(1));
        assert!(ok);
        assert!(sum.to_f64().unwrap() <= 1.0);
    }

    #[test]
    fn prefix_leftmost_chains_are_a() {
        let prefix = l3_witness_prefix(BlockSchedule::minimal(3));
        assert_eq!(prefix.depth(), 11);
        // The root's leftmost chain through block 0 (depths 0 and 1).
        assert!(prefix.is_a(&[]));
        assert!(prefix.is_a(&[false]));
        // A non-leftmost node in block 0 is b.
        assert!(!prefix.is_a(&[true]));

        // Every block-entry node has an a-labeled leftmost chain below it.
        let schedule = prefix.schedule().clone();
        for (n, &f_n) in schedule.values().iter().enumerate() {
            if n == schedule.blocks() {
                break;
            }
            let f_next = schedule.values()[n + 1];
            // Take an arbitrary entry node: all-right path to depth f(n).
            let mut path = vec![true; f_n as usize];
            for d in f_n..f_next {
                assert!(prefix.is_a(&path), "depth {d} of block {n}");
                path.push(false);
            }
        }
    }

    #[test]
    fn prefix_non_leftmost_nodes_are_b() {
        let prefix = l3_witness_prefix(BlockSchedule::minimal(2));
        for d in 0..=prefix.depth() {
            let labels = prefix.level(d);
            assert_eq!(labels.len(), 1usize << d);
            let entry = prefix.schedule().values()[prefix.block_of(d)];
            for (i, &is_a) in labels.iter().enumerate() {
                // A node is `a` iff its bits below the block entry are all 0.
                let below = d - entry;
                let mask = (1usize << below) - 1;
                assert_eq!(is_a, i & mask == 0, "depth {d} index {i}");
            }
        }
    }
}
