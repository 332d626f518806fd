//! Compiles derivations into finite run graphs.
//!
//! A run graph is a finite rooted graph whose inner nodes carry a state, a
//! letter and two successors, and whose port leaves carry just a state.
//! Its infinite unfolding is a partial run; the graph is the regular
//! presentation of it. Rule by rule:
//!
//! * an axiom becomes one inner node with two fresh ports;
//! * looping redirects the edges of one port of the root state back to
//!   the root and deletes that port;
//! * unification redirects the edges of one port into the root of the
//!   second premise's graph;
//! * deduplication merges two ports of the same state into one.
//!
//! Ports are counted as port *nodes* of the graph, not as leaf occurrences
//! of the unfolding, so the graph's profile tracks the conclusion exactly
//! even after looping makes the unfolding infinite.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::automaton::{LetterId, StateId, SubzeroAutomaton};
use crate::calculus::{validate_derivation, Derivation, Profile, Rule};
use crate::multiset::Multiset;

/// Identifier of a node inside one run graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunNode {
    Inner {
        state: StateId,
        letter: LetterId,
        left: NodeId,
        right: NodeId,
    },
    Port {
        state: StateId,
    },
}

impl RunNode {
    pub fn state(&self) -> StateId {
        match *self {
            RunNode::Inner { state, .. } | RunNode::Port { state } => state,
        }
    }

    pub fn is_port(&self) -> bool {
        matches!(self, RunNode::Port { .. })
    }
}

/// A finite rooted run graph. Node ids are arbitrary but unique; graphs
/// built by [`realize`] use dense ids in breadth-first order from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunGraph {
    nodes: BTreeMap<NodeId, RunNode>,
    root: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("root node {} does not exist", .0.index())]
    MissingRoot(NodeId),
    #[error("node {} references missing node {}", .0.index(), .1.index())]
    DanglingEdge(NodeId, NodeId),
}

impl RunGraph {
    pub fn new(nodes: BTreeMap<NodeId, RunNode>, root: NodeId) -> Self {
        Self { nodes, root }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Option<&RunNode> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &RunNode)> {
        self.nodes.iter().map(|(&id, n)| (id, n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Checks that the root and every referenced node exist.
    pub fn check_structure(&self) -> Result<(), StructureError> {
        if !self.nodes.contains_key(&self.root) {
            return Err(StructureError::MissingRoot(self.root));
        }
        for (&id, node) in &self.nodes {
            if let RunNode::Inner { left, right, .. } = *node {
                for child in [left, right] {
                    if !self.nodes.contains_key(&child) {
                        return Err(StructureError::DanglingEdge(id, child));
                    }
                }
            }
        }
        Ok(())
    }

    /// Node ids reachable from the root, in breadth-first order.
    /// Panics on dangling edges; check the structure first.
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut order = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.root);
        seen.insert(self.root);
        while let Some(id) = queue.pop_front() {
            order.push(id);
            if let RunNode::Inner { left, right, .. } = self.nodes[&id] {
                for child in [left, right] {
                    if seen.insert(child) {
                        queue.push_back(child);
                    }
                }
            }
        }
        order
    }

    /// Drops unreachable nodes and renumbers the rest densely in
    /// breadth-first order from the root.
    pub fn renumbered(&self) -> RunGraph {
        let order = self.reachable();
        let remap: BTreeMap<NodeId, NodeId> = order
            .iter()
            .enumerate()
            .map(|(i, &old)| (old, NodeId(i)))
            .collect();
        let nodes = order
            .iter()
            .map(|&old| {
                let node = match self.nodes[&old] {
                    RunNode::Inner {
                        state,
                        letter,
                        left,
                        right,
                    } => RunNode::Inner {
                        state,
                        letter,
                        left: remap[&left],
                        right: remap[&right],
                    },
                    port => port,
                };
                (remap[&old], node)
            })
            .collect();
        RunGraph {
            nodes,
            root: remap[&self.root],
        }
    }
}

/// Root state, maximal reachable inner state (falling back to the root's
/// state when no inner node exists), and the multiset of reachable port
/// nodes.
pub fn graph_profile(a: &SubzeroAutomaton, g: &RunGraph) -> Profile {
    let reachable = g.reachable();
    let mut bound = None;
    let mut ports = Multiset::empty(a.num_states());
    for &id in &reachable {
        match g.nodes[&id] {
            RunNode::Inner { state, .. } => {
                bound = Some(bound.map_or(state, |b: StateId| b.max(state)));
            }
            RunNode::Port { state } => ports.add(state, 1),
        }
    }
    let root_state = g.nodes[&g.root].state();
    Profile::new(root_state, bound.unwrap_or(root_state), ports)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("derivation rejected: {0}")]
    InvalidDerivation(String),
}

/// Compiles a valid derivation into a run graph whose profile matches the
/// conclusion: same root, same port multiset, bound at most the declared
/// one.
pub fn realize(a: &SubzeroAutomaton, d: &Derivation) -> Result<RunGraph, RealizeError> {
    let report = validate_derivation(a, d);
    if !report.is_ok() {
        let first = report.violations[0].to_string();
        return Err(RealizeError::InvalidDerivation(first));
    }
    let g = build(d);
    debug_assert_eq!(g.check_structure(), Ok(()));
    debug_assert_eq!(
        {
            let p = graph_profile(a, &g);
            (p.root, p.ports)
        },
        (d.conclusion().root, d.conclusion().ports.clone())
    );
    Ok(g)
}

fn build(d: &Derivation) -> RunGraph {
    match d.rule() {
        Rule::Axiom => {
            let t = d.transition().expect("validated axiom");
            let nodes = BTreeMap::from([
                (
                    NodeId(0),
                    RunNode::Inner {
                        state: t.source,
                        letter: t.letter,
                        left: NodeId(1),
                        right: NodeId(2),
                    },
                ),
                (NodeId(1), RunNode::Port { state: t.left }),
                (NodeId(2), RunNode::Port { state: t.right }),
            ]);
            RunGraph::new(nodes, NodeId(0))
        }
        Rule::WeakLoop | Rule::StrongLoop => {
            let premise = build(&d.premises()[0]);
            let p = d.conclusion().root;
            let port = first_port(&premise, p);
            redirect_and_drop(premise, port, None)
        }
        Rule::Unify => {
            let g1 = build(&d.premises()[0]);
            let g2 = build(&d.premises()[1]);
            let r = d.port().expect("validated unification");
            let port = first_port(&g1, r);
            // Splice g2 in with offset ids, then reroute the consumed port
            // into its root.
            let offset = g1
                .nodes
                .keys()
                .last()
                .map(|id| id.index() + 1)
                .unwrap_or(0);
            let mut nodes = g1.nodes.clone();
            for (&id, &node) in &g2.nodes {
                let shifted = match node {
                    RunNode::Inner {
                        state,
                        letter,
                        left,
                        right,
                    } => RunNode::Inner {
                        state,
                        letter,
                        left: NodeId(left.index() + offset),
                        right: NodeId(right.index() + offset),
                    },
                    port => port,
                };
                nodes.insert(NodeId(id.index() + offset), shifted);
            }
            let merged = RunGraph::new(nodes, g1.root);
            redirect_and_drop(merged, port, Some(NodeId(g2.root.index() + offset)))
        }
        Rule::Dedup => {
            let premise = build(&d.premises()[0]);
            let r = d.port().expect("validated deduplication");
            let (keep, dropped) = {
                let mut ports = premise
                    .nodes
                    .iter()
                    .filter(|(_, n)| matches!(n, RunNode::Port { state } if *state == r))
                    .map(|(&id, _)| id);
                let keep = ports.next().expect("validated multiplicity");
                let dropped = ports.next().expect("validated multiplicity");
                (keep, dropped)
            };
            redirect_and_drop(premise, dropped, Some(keep))
        }
    }
}

/// The smallest-id port node of the given state.
fn first_port(g: &RunGraph, state: StateId) -> NodeId {
    g.nodes
        .iter()
        .find(|(_, n)| matches!(n, RunNode::Port { state: s } if *s == state))
        .map(|(&id, _)| id)
        .expect("validated derivation keeps profile and graph ports in sync")
}

/// Points every edge into `from` at `to` (the root when `None`), removes
/// `from`, and renumbers breadth-first.
fn redirect_and_drop(mut g: RunGraph, from: NodeId, to: Option<NodeId>) -> RunGraph {
    let target = to.unwrap_or(g.root);
    for node in g.nodes.values_mut() {
        if let RunNode::Inner { left, right, .. } = node {
            if *left == from {
                *left = target;
            }
            if *right == from {
                *right = target;
            }
        }
    }
    if g.root == from {
        g.root = target;
    }
    g.nodes.remove(&from);
    g.renumbered()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{apply_axiom, apply_d, apply_u, apply_wl};
    use crate::examples::make_example12;

    fn example12_witness(a: &SubzeroAutomaton) -> Derivation {
        let bot = a.state_by_name("bot").unwrap();
        let tq = a.transitions()[0];
        let tb = a.transitions()[2];
        let d1 = apply_d(apply_axiom(a, tq).unwrap(), bot).unwrap();
        let d2 = apply_wl(a, apply_d(apply_axiom(a, tb).unwrap(), bot).unwrap()).unwrap();
        apply_u(d1, d2, bot).unwrap()
    }

    #[test]
    fn axiom_graph_shape() {
        let a = make_example12();
        let d = apply_axiom(&a, a.transitions()[0]).unwrap();
        let g = realize(&a, &d).unwrap();
        assert_eq!(g.len(), 3);
        let p = graph_profile(&a, &g);
        assert_eq!(&p, d.conclusion());
    }

    #[test]
    fn example12_witness_realizes_to_two_inner_loop() {
        let a = make_example12();
        let d = example12_witness(&a);
        let g = realize(&a, &d).unwrap();
        // Root q feeding both edges into a bot self-loop; no ports.
        assert_eq!(g.len(), 2);
        let q = a.state_by_name("q").unwrap();
        let bot = a.state_by_name("bot").unwrap();
        match g.node(g.root()).unwrap() {
            RunNode::Inner {
                state, left, right, ..
            } => {
                assert_eq!(*state, q);
                assert_eq!(left, right);
                match g.node(*left).unwrap() {
                    RunNode::Inner {
                        state, left, right, ..
                    } => {
                        assert_eq!(*state, bot);
                        assert_eq!(*left, *right);
                    }
                    _ => panic!("expected inner bot node"),
                }
            }
            _ => panic!("expected inner root"),
        }
        let p = graph_profile(&a, &g);
        assert!(p.ports.is_empty());
        assert_eq!(p.root, q);
    }

    #[test]
    fn dedup_drops_one_port_node() {
        let a = make_example12();
        let ax = apply_axiom(&a, a.transitions()[0]).unwrap();
        let g0 = realize(&a, &ax).unwrap();
        assert_eq!(g0.len(), 3);
        let bot = a.state_by_name("bot").unwrap();
        let d = apply_d(ax, bot).unwrap();
        let g1 = realize(&a, &d).unwrap();
        assert_eq!(g1.len(), 2);
        assert_eq!(graph_profile(&a, &g1).ports.count(bot), 1);
    }

    #[test]
    fn invalid_derivation_is_rejected() {
        let a = make_example12();
        let l3 = crate::examples::make_l3();
        let d = apply_axiom(&l3, l3.transitions()[0]).unwrap();
        assert!(matches!(
            realize(&a, &d),
            Err(RealizeError::InvalidDerivation(_))
        ));
    }

    #[test]
    fn node_count_stays_within_three_per_vertex() {
        let a = crate::examples::make_branching_fragment();
        let p = a.state_by_name("p").unwrap();
        let d1 = apply_axiom(&a, a.transitions()[1]).unwrap();
        let d2 = apply_axiom(&a, a.transitions()[0]).unwrap();
        let u = apply_u(d1, d2, p).unwrap();
        let g = realize(&a, &u).unwrap();
        assert!(g.len() as u64 <= 3 * u.size());
    }
}
