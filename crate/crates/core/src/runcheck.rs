//! Verifies run graphs: transition consistency, the universal condition on
//! infinite branches, and the exact measure of the bad branch set.
//!
//! A branch of the unfolding is generated by fair coin flips; port nodes
//! absorb it. Almost every branch either exits at a port or settles in a
//! bottom strongly connected component of inner nodes, where its maximal
//! recurring state is that component's maximum. The measure of branches
//! whose maximal recurring state lies in `Q_zero` is therefore the
//! absorption probability into the bad bottom components, computed here as
//! the exact rational solution of a linear system. Branches that never
//! settle form a null set and are ignored.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, One, Zero};

use crate::automaton::{StateId, SubzeroAutomaton};
use crate::realizer::{NodeId, RunGraph, RunNode, StructureError};

/// Result of [`check_all_condition`]: either every reachable cycle has its
/// maximum state in `Q_all`, or a concrete offending cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AllCondition {
    Ok,
    /// A reachable cycle whose maximum state is outside `Q_all`, listed in
    /// traversal order without repeating the first node.
    Counterexample(Vec<NodeId>),
}

impl AllCondition {
    pub fn is_ok(&self) -> bool {
        matches!(self, AllCondition::Ok)
    }
}

/// What [`check_partial_run`] found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptanceReport {
    /// Every reachable inner node instantiates a transition of the
    /// automaton.
    pub transitions_ok: bool,
    /// Detail lines for transition failures.
    pub transition_errors: Vec<String>,
    pub all_condition: AllCondition,
    /// Exact measure of the branches whose maximal recurring state is in
    /// `Q_zero`, ports treated as absorbing exits.
    pub zero_measure: BigRational,
    /// Whether that measure is zero.
    pub zero_condition: bool,
}

impl AcceptanceReport {
    /// All three checks pass (ports may still be present).
    pub fn is_ok(&self) -> bool {
        self.transitions_ok && self.all_condition.is_ok() && self.zero_condition
    }
}

/// Checks a run graph as a partial run: transition consistency, the cycle
/// condition, and the measure-zero condition.
pub fn check_partial_run(
    a: &SubzeroAutomaton,
    g: &RunGraph,
) -> Result<AcceptanceReport, StructureError> {
    g.check_structure()?;
    let mut transition_errors = Vec::new();
    for &id in &g.reachable() {
        if let RunNode::Inner {
            state,
            letter,
            left,
            right,
        } = g.node(id).unwrap()
        {
            let ok = a.valid_state(*state)
                && a.valid_letter(*letter)
                && a.transitions().iter().any(|t| {
                    t.source == *state
                        && t.letter == *letter
                        && t.left == g.node(*left).unwrap().state()
                        && t.right == g.node(*right).unwrap().state()
                });
            if !ok {
                transition_errors.push(format!(
                    "node {} is not consistent with the transition relation",
                    id.index()
                ));
            }
        }
    }
    let zero_measure = zero_measure_exact(a, g);
    let zero_condition = zero_measure.is_zero();
    debug_assert_eq!(zero_condition, zero_measure_is_zero_structural(a, g));
    Ok(AcceptanceReport {
        transitions_ok: transition_errors.is_empty(),
        transition_errors,
        all_condition: check_all_condition(a, g),
        zero_measure,
        zero_condition,
    })
}

/// True iff the graph is an accepting run: structurally valid, no
/// reachable ports, consistent transitions, every cycle's maximum in
/// `Q_all`, and bad branches of measure zero.
pub fn is_accepting_run(a: &SubzeroAutomaton, g: &RunGraph) -> bool {
    match check_partial_run(a, g) {
        Ok(report) => {
            let has_ports = g
                .reachable()
                .iter()
                .any(|&id| g.node(id).unwrap().is_port());
            report.is_ok() && !has_ports
        }
        Err(_) => false,
    }
}

/// Adjacency over the reachable inner nodes.
struct InnerGraph {
    ids: Vec<NodeId>,
    states: Vec<StateId>,
    /// Successor indexes into `ids` (ports are dropped); at most two.
    succs: Vec<Vec<usize>>,
    /// Whether the node has an edge to a port.
    exits: Vec<bool>,
    index_of: BTreeMap<NodeId, usize>,
}

fn inner_graph(g: &RunGraph) -> InnerGraph {
    let reachable = g.reachable();
    let mut ids = Vec::new();
    let mut index_of = BTreeMap::new();
    for &id in &reachable {
        if !g.node(id).unwrap().is_port() {
            index_of.insert(id, ids.len());
            ids.push(id);
        }
    }
    let mut states = Vec::with_capacity(ids.len());
    let mut succs = Vec::with_capacity(ids.len());
    let mut exits = Vec::with_capacity(ids.len());
    for &id in &ids {
        match g.node(id).unwrap() {
            RunNode::Inner {
                state, left, right, ..
            } => {
                states.push(*state);
                let mut s = Vec::with_capacity(2);
                let mut exit = false;
                for child in [left, right] {
                    match index_of.get(child) {
                        Some(&i) => s.push(i),
                        None => exit = true,
                    }
                }
                succs.push(s);
                exits.push(exit);
            }
            RunNode::Port { .. } => unreachable!("ports filtered out"),
        }
    }
    InnerGraph {
        ids,
        states,
        succs,
        exits,
        index_of,
    }
}

/// Tarjan's algorithm; components come out in reverse topological order.
fn sccs(n: usize, succs: &dyn Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    struct State<'a> {
        succs: &'a dyn Fn(usize) -> Vec<usize>,
        index: usize,
        indices: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        components: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.indices[v] = Some(s.index);
        s.low[v] = s.index;
        s.index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in (s.succs)(v) {
            match s.indices[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(i) if s.on_stack[w] => {
                    s.low[v] = s.low[v].min(i);
                }
                _ => {}
            }
        }
        if s.low[v] == s.indices[v].unwrap() {
            let mut component = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                component.push(w);
                if w == v {
                    break;
                }
            }
            component.sort_unstable();
            s.components.push(component);
        }
    }
    let mut state = State {
        succs,
        index: 0,
        indices: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        components: Vec::new(),
    };
    for v in 0..n {
        if state.indices[v].is_none() {
            visit(&mut state, v);
        }
    }
    state.components
}

/// Every reachable cycle must have its maximum state in `Q_all`. For each
/// offending priority `q` (ascending) the graph is restricted to states up
/// to `q`; a cycle through a `q` node in that restriction has maximum
/// exactly `q`. The first violation found is returned as a shortest cycle
/// through its smallest `q` node. Panics on structurally invalid graphs.
pub fn check_all_condition(a: &SubzeroAutomaton, g: &RunGraph) -> AllCondition {
    let inner = inner_graph(g);
    for q in a.states() {
        if a.is_all(q) {
            continue;
        }
        // Restrict to nodes of state <= q.
        let allowed: Vec<bool> = inner.states.iter().map(|&s| s <= q).collect();
        let succs = |v: usize| -> Vec<usize> {
            if !allowed[v] {
                return Vec::new();
            }
            inner.succs[v]
                .iter()
                .copied()
                .filter(|&w| allowed[w])
                .collect()
        };
        for component in sccs(inner.ids.len(), &succs) {
            if !allowed[component[0]] {
                continue;
            }
            let cyclic = component.len() > 1
                || succs(component[0]).contains(&component[0]);
            if !cyclic {
                continue;
            }
            let Some(&start) = component.iter().find(|&&v| inner.states[v] == q) else {
                continue;
            };
            let cycle = shortest_cycle(start, &component, &succs);
            return AllCondition::Counterexample(
                cycle.into_iter().map(|v| inner.ids[v]).collect(),
            );
        }
    }
    AllCondition::Ok
}

/// Shortest cycle from `start` back to itself inside `component`.
fn shortest_cycle(
    start: usize,
    component: &[usize],
    succs: &dyn Fn(usize) -> Vec<usize>,
) -> Vec<usize> {
    let members: BTreeSet<usize> = component.iter().copied().collect();
    // Breadth-first predecessors from start, within the component.
    let mut pred: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for w in succs(v) {
            if !members.contains(&w) {
                continue;
            }
            if w == start {
                // Walk back from v to start.
                let mut path = vec![v];
                let mut cur = v;
                while cur != start {
                    cur = pred[&cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = pred.entry(w) {
                e.insert(v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("start lies on a cycle of its component")
}

/// Indexes (into the inner graph) of the bottom strongly connected
/// components, split into bad (maximum state in `Q_zero`) and good.
fn bottom_components(a: &SubzeroAutomaton, inner: &InnerGraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let succs = |v: usize| inner.succs[v].clone();
    let mut bad = Vec::new();
    let mut good = Vec::new();
    for component in sccs(inner.ids.len(), &succs) {
        let is_bottom = component.iter().all(|&v| {
            !inner.exits[v] && inner.succs[v].iter().all(|w| component.contains(w))
        });
        // A single node without a self-loop is not a component a branch
        // can settle in.
        let cyclic =
            component.len() > 1 || inner.succs[component[0]].contains(&component[0]);
        if !is_bottom || !cyclic {
            continue;
        }
        let max_state = component
            .iter()
            .map(|&v| inner.states[v])
            .max()
            .expect("nonempty component");
        if a.is_zero(max_state) {
            bad.push(component);
        } else {
            good.push(component);
        }
    }
    (bad, good)
}

/// Exact measure of the branches whose maximal recurring state lies in
/// `Q_zero`. Panics on structurally invalid graphs.
pub fn zero_measure_exact(a: &SubzeroAutomaton, g: &RunGraph) -> BigRational {
    g.check_structure().expect("structurally valid graph");
    let inner = inner_graph(g);
    if inner.ids.is_empty() {
        return BigRational::zero();
    }
    let (bad, good) = bottom_components(a, &inner);
    let in_bad: BTreeSet<usize> = bad.iter().flatten().copied().collect();
    if in_bad.is_empty() {
        return BigRational::zero();
    }
    let in_good: BTreeSet<usize> = good.iter().flatten().copied().collect();

    let n = inner.ids.len();
    // Unknown x_v = probability of settling in a bad bottom component from
    // v. Known: 1 inside bad components, 0 inside good ones and at ports.
    let unknowns: Vec<usize> = (0..n)
        .filter(|v| !in_bad.contains(v) && !in_good.contains(v))
        .collect();
    let col_of: BTreeMap<usize, usize> = unknowns
        .iter()
        .enumerate()
        .map(|(c, &v)| (v, c))
        .collect();
    let m = unknowns.len();
    let half = BigRational::new(1.into(), 2.into());

    // Row for v: x_v - 1/2 x_l - 1/2 x_r = (known contributions).
    let mut matrix: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); m + 1]; m];
    for (row, &v) in unknowns.iter().enumerate() {
        matrix[row][row] = BigRational::one();
        for &w in &inner.succs[v] {
            if in_bad.contains(&w) {
                matrix[row][m] += &half;
            } else if let Some(&c) = col_of.get(&w) {
                let cell = matrix[row][c].clone() - &half;
                matrix[row][c] = cell;
            }
        }
    }

    gaussian_solve(&mut matrix, m);

    let root_index = inner.index_of[&g.root()];
    if in_bad.contains(&root_index) {
        BigRational::one()
    } else if in_good.contains(&root_index) {
        BigRational::zero()
    } else {
        matrix[col_of[&root_index]][m].clone()
    }
}

/// In-place Gaussian elimination to reduced row echelon form; afterwards
/// row `i` holds the solution for unknown `i` in its last column. The
/// system here is always uniquely solvable.
fn gaussian_solve(matrix: &mut [Vec<BigRational>], m: usize) {
    for col in 0..m {
        let pivot_row = (col..m)
            .find(|&r| !matrix[r][col].is_zero())
            .expect("absorbing system is nonsingular");
        matrix.swap(col, pivot_row);
        let pivot = matrix[col][col].clone();
        for cell in matrix[col].iter_mut() {
            *cell /= pivot.clone();
        }
        let pivot_values = matrix[col].clone();
        for (row, cells) in matrix.iter_mut().enumerate().take(m) {
            if row == col || cells[col].is_zero() {
                continue;
            }
            let factor = cells[col].clone();
            for (c, pivot_cell) in pivot_values.iter().enumerate().skip(col) {
                let delta = factor.clone() * pivot_cell.clone();
                cells[c] -= delta;
            }
        }
    }
}

/// Structural characterization: the measure is zero exactly when no
/// reachable bottom component of inner nodes has its maximum state in
/// `Q_zero`. Kept as an independent code path from the linear solver.
pub fn zero_measure_is_zero_structural(a: &SubzeroAutomaton, g: &RunGraph) -> bool {
    let inner = inner_graph(g);
    let (bad, _) = bottom_components(a, &inner);
    bad.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::LetterId;
    use crate::calculus::{apply_axiom, apply_d, apply_u, apply_wl};
    use crate::examples::make_example12;
    use crate::realizer::realize;
    use num::ToPrimitive;

    fn example12_graph() -> (SubzeroAutomaton, RunGraph) {
        let a = make_example12();
        let bot = a.state_by_name("bot").unwrap();
        let d1 = apply_d(apply_axiom(&a, a.transitions()[0]).unwrap(), bot).unwrap();
        let d2 = apply_wl(
            &a,
            apply_d(apply_axiom(&a, a.transitions()[2]).unwrap(), bot).unwrap(),
        )
        .unwrap();
        let d = apply_u(d1, d2, bot).unwrap();
        let g = realize(&a, &d).unwrap();
        (a, g)
    }

    /// A single inner node looping to itself on both edges.
    fn self_loop(q_all: &[&str], q_zero: &[&str]) -> (SubzeroAutomaton, RunGraph) {
        let a = SubzeroAutomaton::from_names(
            &["q"],
            &["a"],
            &[("q", "a", "q", "q")],
            q_all,
            q_zero,
        )
        .unwrap();
        let nodes = BTreeMap::from([(
            NodeId(0),
            RunNode::Inner {
                state: StateId(0),
                letter: LetterId(0),
                left: NodeId(0),
                right: NodeId(0),
            },
        )]);
        (a, RunGraph::new(nodes, NodeId(0)))
    }

    #[test]
    fn example12_run_is_accepting_with_zero_measure() {
        let (a, g) = example12_graph();
        let report = check_partial_run(&a, &g).unwrap();
        assert!(report.transitions_ok);
        assert!(report.all_condition.is_ok());
        assert!(report.zero_measure.is_zero());
        assert!(report.zero_condition);
        assert!(is_accepting_run(&a, &g));
    }

    #[test]
    fn self_loop_outside_q_all_is_a_counterexample() {
        let (a, g) = self_loop(&[], &[]);
        let report = check_partial_run(&a, &g).unwrap();
        assert!(report.transitions_ok);
        assert_eq!(
            report.all_condition,
            AllCondition::Counterexample(vec![NodeId(0)])
        );
    }

    #[test]
    fn self_loop_in_q_all_and_q_zero_has_measure_one() {
        let (a, g) = self_loop(&["q"], &["q"]);
        let report = check_partial_run(&a, &g).unwrap();
        assert!(report.transitions_ok);
        assert!(report.all_condition.is_ok());
        assert_eq!(report.zero_measure, BigRational::one());
        assert!(!report.zero_condition);
        assert!(!is_accepting_run(&a, &g));
    }

    #[test]
    fn acyclic_graph_passes_vacuously() {
        let a = make_example12();
        let d = apply_axiom(&a, a.transitions()[0]).unwrap();
        let g = realize(&a, &d).unwrap();
        let report = check_partial_run(&a, &g).unwrap();
        assert!(report.all_condition.is_ok());
        assert!(report.zero_condition);
        // Ports present, so not an accepting run.
        assert!(!is_accepting_run(&a, &g));
    }

    #[test]
    fn two_node_bad_cycle_reports_both_nodes() {
        // States: low < high, neither in Q_all.
        let a = SubzeroAutomaton::from_names(
            &["low", "high"],
            &["a"],
            &[("low", "a", "high", "high"), ("high", "a", "low", "low")],
            &[],
            &[],
        )
        .unwrap();
        let nodes = BTreeMap::from([
            (
                NodeId(0),
                RunNode::Inner {
                    state: StateId(0),
                    letter: LetterId(0),
                    left: NodeId(1),
                    right: NodeId(1),
                },
            ),
            (
                NodeId(1),
                RunNode::Inner {
                    state: StateId(1),
                    letter: LetterId(0),
                    left: NodeId(0),
                    right: NodeId(0),
                },
            ),
        ]);
        let g = RunGraph::new(nodes, NodeId(0));
        match check_all_condition(&a, &g) {
            AllCondition::Counterexample(cycle) => {
                let set: BTreeSet<NodeId> = cycle.into_iter().collect();
                assert_eq!(set, BTreeSet::from([NodeId(0), NodeId(1)]));
            }
            AllCondition::Ok => panic!("cycle should violate the condition"),
        }
    }

    #[test]
    fn half_split_graph_has_measure_one_half() {
        // Root branching left into a bad self-loop and right into a good
        // one. States: good < bad, root uses the good state.
        let a = SubzeroAutomaton::from_names(
            &["good", "bad"],
            &["a"],
            &[
                ("good", "a", "bad", "good"),
                ("bad", "a", "bad", "bad"),
                ("good", "a", "good", "good"),
            ],
            &["good", "bad"],
            &["bad"],
        )
        .unwrap();
        let nodes = BTreeMap::from([
            (
                NodeId(0),
                RunNode::Inner {
                    state: StateId(0),
                    letter: LetterId(0),
                    left: NodeId(1),
                    right: NodeId(2),
                },
            ),
            (
                NodeId(1),
                RunNode::Inner {
                    state: StateId(1),
                    letter: LetterId(0),
                    left: NodeId(1),
                    right: NodeId(1),
                },
            ),
            (
                NodeId(2),
                RunNode::Inner {
                    state: StateId(0),
                    letter: LetterId(0),
                    left: NodeId(2),
                    right: NodeId(2),
                },
            ),
        ]);
        let g = RunGraph::new(nodes, NodeId(0));
        let measure = zero_measure_exact(&a, &g);
        assert_eq!(measure, BigRational::new(1.into(), 2.into()));
        assert!(!zero_measure_is_zero_structural(&a, &g));
        assert!(measure.to_f64().unwrap() <= 1.0);
    }

    #[test]
    fn ports_absorb_probability() {
        // Inner node with one edge to itself and one to a port: the branch
        // escapes almost surely, so even with the state in Q_zero the
        // measure is zero (no bottom component).
        let a = SubzeroAutomaton::from_names(
            &["q", "stop"],
            &["a"],
            &[("q", "a", "q", "stop")],
            &["q"],
            &["q"],
        )
        .unwrap();
        let nodes = BTreeMap::from([
            (
                NodeId(0),
                RunNode::Inner {
                    state: StateId(0),
                    letter: LetterId(0),
                    left: NodeId(0),
                    right: NodeId(1),
                },
            ),
            (NodeId(1), RunNode::Port { state: StateId(1) }),
        ]);
        let g = RunGraph::new(nodes, NodeId(0));
        assert!(zero_measure_exact(&a, &g).is_zero());
        assert!(zero_measure_is_zero_structural(&a, &g));
    }

    #[test]
    fn dangling_edge_is_a_structure_error() {
        let a = make_example12();
        let nodes = BTreeMap::from([(
            NodeId(0),
            RunNode::Inner {
                state: StateId(1),
                letter: LetterId(0),
                left: NodeId(7),
                right: NodeId(0),
            },
        )]);
        let g = RunGraph::new(nodes, NodeId(0));
        assert!(matches!(
            check_partial_run(&a, &g),
            Err(StructureError::DanglingEdge(_, _))
        ));
        assert!(!is_accepting_run(&a, &g));
    }
}
