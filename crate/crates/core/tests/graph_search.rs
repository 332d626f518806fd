//! Graph-level cross-check of the decision engine: exhaustively build
//! every transition-consistent run graph with up to three inner nodes and
//! no ports, test acceptance directly with the run checker, and demand
//! that the engine answers NONEMPTY whenever such a graph exists. This
//! exercises the completeness direction through run graphs instead of
//! derivations, fully independent of the calculus.

use std::collections::BTreeMap;

use subzero::automaton::{StateId, SubzeroAutomaton};
use subzero::engine::{decide_from, saturate};
use subzero::oracle::{random_automaton, seeded_rng, RandomAutomatonConfig};
use subzero::realizer::{NodeId, RunGraph, RunNode};
use subzero::runcheck::is_accepting_run;

/// All port-free run graphs with exactly `n` nodes rooted at node 0 whose
/// root carries `q0`, consistent with the transition relation.
fn consistent_graphs(a: &SubzeroAutomaton, q0: StateId, n: usize) -> Vec<RunGraph> {
    let mut graphs = Vec::new();
    let num_states = a.num_states();
    // Enumerate state assignments; node 0 is pinned to q0.
    let mut assignment = vec![StateId(0); n];
    assignment[0] = q0;
    enumerate_assignments(a, &mut assignment, 1, num_states, &mut |states| {
        // Per node: all (letter, left, right) choices matching some
        // transition from its state.
        let choices: Vec<Vec<RunNode>> = (0..n)
            .map(|i| {
                let mut out = Vec::new();
                for t in a.transitions() {
                    if t.source != states[i] {
                        continue;
                    }
                    for left in 0..n {
                        if states[left] != t.left {
                            continue;
                        }
                        for right in 0..n {
                            if states[right] != t.right {
                                continue;
                            }
                            out.push(RunNode::Inner {
                                state: t.source,
                                letter: t.letter,
                                left: NodeId(left),
                                right: NodeId(right),
                            });
                        }
                    }
                }
                out
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            return;
        }
        let mut picks = vec![0usize; n];
        loop {
            let nodes: BTreeMap<NodeId, RunNode> = (0..n)
                .map(|i| (NodeId(i), choices[i][picks[i]]))
                .collect();
            graphs.push(RunGraph::new(nodes, NodeId(0)));
            // Odometer over the per-node choices.
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < choices[i].len() {
                    break;
                }
                picks[i] = 0;
            }
        }
    });
    graphs
}

fn enumerate_assignments(
    a: &SubzeroAutomaton,
    assignment: &mut Vec<StateId>,
    from: usize,
    num_states: usize,
    emit: &mut impl FnMut(&[StateId]),
) {
    if from == assignment.len() {
        emit(assignment);
        return;
    }
    for s in 0..num_states {
        assignment[from] = StateId(s);
        enumerate_assignments(a, assignment, from + 1, num_states, emit);
    }
}

#[test]
fn accepting_small_graphs_imply_nonempty_verdicts() {
    let mut accepting_found = 0usize;
    let mut graphs_tested = 0usize;
    for seed in 0..60u64 {
        let cfg = RandomAutomatonConfig {
            num_states: 1 + (seed % 2) as usize,
            num_letters: 1 + (seed % 2) as usize,
            num_transitions: 1 + (seed % 6) as usize,
            p_all: 0.6,
            p_zero: 0.35,
        };
        let a = random_automaton(&mut seeded_rng(seed), &cfg);
        let saturation = saturate(&a).unwrap();
        for q0 in a.states() {
            let mut exists = false;
            for n in 1..=3usize {
                for g in consistent_graphs(&a, q0, n) {
                    graphs_tested += 1;
                    if is_accepting_run(&a, &g) {
                        exists = true;
                        accepting_found += 1;
                    }
                }
            }
            if exists {
                assert!(
                    decide_from(&saturation, q0).unwrap().is_nonempty(),
                    "an accepting run graph exists from {} but the engine says empty",
                    a.state_name(q0)
                );
            }
        }
    }
    println!("graph search: {graphs_tested} graphs, {accepting_found} accepting");
    assert!(accepting_found > 0, "corpus never produced an accepting graph");
}
