//! Brute-force procedures used to cross-validate the engine, realizer and
//! measure checker. Nothing here ever claims emptiness: enumeration under
//! caps reports "not found within caps" and leaves the verdict open.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::{LetterId, StateId, SubzeroAutomaton, Transition};
use crate::calculus::{
    apply_axiom, apply_d, apply_sl, apply_u, apply_wl, rule_d, rule_sl, rule_u, rule_wl,
    Derivation, Profile,
};
use crate::engine::RuleInstance;
use crate::multiset::Multiset;
use crate::realizer::{NodeId, RunGraph, RunNode};

/// Caps keeping the exhaustive searches finite: maximum derivation
/// vertices, maximum port multiplicity per state in any conclusion, and
/// maximum tree depth for run enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_size: u64,
    pub max_multiplicity: u64,
    pub max_depth: u64,
}

impl EnumerationCaps {
    pub fn new(max_size: u64, max_multiplicity: u64, max_depth: u64) -> Self {
        assert!(max_size >= 1 && max_multiplicity >= 1 && max_depth >= 1);
        EnumerationCaps {
            max_size,
            max_multiplicity,
            max_depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
}

fn require_valid(a: &SubzeroAutomaton) -> Result<(), OracleError> {
    let report = a.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(OracleError::InvalidAutomaton(report.to_string()))
    }
}

/// Exhaustive bottom-up search for a derivation of exactly `target`,
/// considering every derivation whose size stays within `max_size` and
/// whose every conclusion keeps multiplicities within `max_multiplicity`.
///
/// Returns the smallest such derivation (ties broken deterministically),
/// or `None` when no derivation exists within the caps. Keeping only a
/// smallest derivation per intermediate profile loses nothing: premises
/// enter rules through their conclusions only, so swapping a sub-derivation
/// for a smaller one of the same conclusion preserves validity and caps.
pub fn enumerate_derivations(
    a: &SubzeroAutomaton,
    target: &Profile,
    caps: &EnumerationCaps,
) -> Result<Option<Derivation>, OracleError> {
    require_valid(a)?;

    let within =
        |p: &Profile| -> bool { p.ports.max_multiplicity() <= caps.max_multiplicity };

    // Smallest size and first rule application per derivable profile.
    let mut dist: BTreeMap<Profile, (u64, RuleInstance)> = BTreeMap::new();
    // Profiles first derived at each size, with a root index for pairing.
    let mut by_size: Vec<Vec<Profile>> = vec![Vec::new(); caps.max_size as usize + 1];

    let mut candidates: BTreeMap<Profile, RuleInstance> = BTreeMap::new();
    let mut transitions = a.transitions().to_vec();
    transitions.sort();
    for t in transitions {
        let d = apply_axiom(a, t).expect("listed transition");
        let profile = d.conclusion().clone();
        if within(&profile) {
            merge_min(&mut candidates, profile, RuleInstance::Axiom { transition: t });
        }
    }

    for size in 1..=caps.max_size {
        for (profile, inst) in std::mem::take(&mut candidates) {
            if dist.contains_key(&profile) {
                continue;
            }
            dist.insert(profile.clone(), (size, inst));
            by_size[size as usize].push(profile);
        }
        if let Some((found_size, _)) = dist.get(target) {
            debug_assert_eq!(*found_size, size);
            return Ok(Some(rebuild(a, target, &dist)));
        }
        if size == caps.max_size {
            break;
        }

        // Unary rules grow the size by one.
        for p in &by_size[size as usize] {
            if let Ok(c) = rule_wl(a, p) {
                if within(&c) && !dist.contains_key(&c) {
                    merge_min(&mut candidates, c, RuleInstance::WeakLoop { premise: p.clone() });
                }
            }
            if let Ok(c) = rule_sl(a, p) {
                if within(&c) && !dist.contains_key(&c) {
                    merge_min(
                        &mut candidates,
                        c,
                        RuleInstance::StrongLoop { premise: p.clone() },
                    );
                }
            }
            for r in p.ports.support() {
                if let Ok(c) = rule_d(p, r) {
                    if within(&c) && !dist.contains_key(&c) {
                        merge_min(
                            &mut candidates,
                            c,
                            RuleInstance::Dedup {
                                premise: p.clone(),
                                port: r,
                            },
                        );
                    }
                }
            }
        }
        // Binary rule: premise sizes must add to `size`.
        for s1 in 1..size {
            let s2 = size - s1;
            for p1 in &by_size[s1 as usize] {
                for p2 in &by_size[s2 as usize] {
                    for r in p1.ports.support() {
                        if p2.root != r {
                            continue;
                        }
                        if let Ok(c) = rule_u(p1, p2, r) {
                            if within(&c) && !dist.contains_key(&c) {
                                merge_min(
                                    &mut candidates,
                                    c,
                                    RuleInstance::Unify {
                                        premise1: p1.clone(),
                                        premise2: p2.clone(),
                                        port: r,
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn merge_min<K: Ord, V: Ord>(map: &mut BTreeMap<K, V>, key: K, value: V) {
    match map.get(&key) {
        Some(existing) if *existing <= value => {}
        _ => {
            map.insert(key, value);
        }
    }
}

fn rebuild(
    a: &SubzeroAutomaton,
    profile: &Profile,
    dist: &BTreeMap<Profile, (u64, RuleInstance)>,
) -> Derivation {
    let (_, inst) = &dist[profile];
    match inst {
        RuleInstance::Axiom { transition } => {
            apply_axiom(a, *transition).expect("recorded axiom")
        }
        RuleInstance::WeakLoop { premise } => {
            apply_wl(a, rebuild(a, premise, dist)).expect("recorded step")
        }
        RuleInstance::StrongLoop { premise } => {
            apply_sl(a, rebuild(a, premise, dist)).expect("recorded step")
        }
        RuleInstance::Unify {
            premise1,
            premise2,
            port,
        } => apply_u(rebuild(a, premise1, dist), rebuild(a, premise2, dist), *port)
            .expect("recorded step"),
        RuleInstance::Dedup { premise, port } => {
            apply_d(rebuild(a, premise, dist), *port).expect("recorded step")
        }
    }
}

/// Profiles of all finite transition-consistent trees of depth up to
/// `max_depth` rooted at `root`. Depth 1 is a single transition; depth 0
/// admits no tree, because a bare port has no inner root.
pub fn enumerate_finite_runs(
    a: &SubzeroAutomaton,
    root: StateId,
    max_depth: u64,
) -> Result<BTreeSet<Profile>, OracleError> {
    require_valid(a)?;
    let mut memo: BTreeMap<(StateId, u64), BTreeSet<(StateId, Multiset)>> = BTreeMap::new();
    let set = runs_from(a, root, max_depth, &mut memo);
    Ok(set
        .into_iter()
        .map(|(bound, ports)| Profile::new(root, bound, ports))
        .collect())
}

/// Pairs (maximal inner state, leaf multiset) of trees rooted at `s`.
fn runs_from(
    a: &SubzeroAutomaton,
    s: StateId,
    depth: u64,
    memo: &mut BTreeMap<(StateId, u64), BTreeSet<(StateId, Multiset)>>,
) -> BTreeSet<(StateId, Multiset)> {
    if depth == 0 {
        return BTreeSet::new();
    }
    if let Some(hit) = memo.get(&(s, depth)) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    for t in a.transitions().iter().filter(|t| t.source == s) {
        // A child is either a port leaf or a subtree one level shallower.
        let child_options = |q: StateId, memo: &mut BTreeMap<_, _>| {
            let mut options: Vec<(Option<StateId>, Multiset)> =
                vec![(None, Multiset::from_states(a.num_states(), &[q]))];
            for (bound, ports) in runs_from(a, q, depth - 1, memo) {
                options.push((Some(bound), ports));
            }
            options
        };
        let lefts = child_options(t.left, memo);
        let rights = child_options(t.right, memo);
        for (lb, lw) in &lefts {
            for (rb, rw) in &rights {
                let mut bound = s;
                for b in [lb, rb].into_iter().flatten() {
                    bound = bound.max(*b);
                }
                out.insert((bound, lw.sum(rw)));
            }
        }
    }
    memo.insert((s, depth), out.clone());
    out
}

/// Monte Carlo estimate of the bad-branch measure: the fraction of
/// `samples` random root walks (fair coin per step, ports absorbing) that
/// after `horizon` steps sit inside a bottom component whose maximum state
/// is in `Q_zero`. Deterministic for a fixed seed.
pub fn mc_zero_measure(
    a: &SubzeroAutomaton,
    g: &RunGraph,
    samples: u64,
    horizon: u64,
    seed: u64,
) -> f64 {
    g.check_structure().expect("structurally valid graph");
    // Dense arrays over all node ids present in the graph.
    let ids: Vec<NodeId> = g.nodes().map(|(id, _)| id).collect();
    let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut left = vec![usize::MAX; ids.len()];
    let mut right = vec![usize::MAX; ids.len()];
    let mut is_port = vec![false; ids.len()];
    for (i, &id) in ids.iter().enumerate() {
        match g.node(id).unwrap() {
            RunNode::Inner { left: l, right: r, .. } => {
                left[i] = index[l];
                right[i] = index[r];
            }
            RunNode::Port { .. } => is_port[i] = true,
        }
    }
    // A walk that enters a bottom component can never leave it, so its
    // classification at the horizon is already decided.
    let settled = bottom_membership(a, g, &ids);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = index[&g.root()];
    let mut bad_walks = 0u64;
    let mut bits: u64 = 0;
    let mut bits_left = 0u32;
    for _ in 0..samples {
        let mut pos = root;
        let mut bad = false;
        for _ in 0..horizon {
            if is_port[pos] {
                break;
            }
            if let Some(is_bad) = settled[pos] {
                bad = is_bad;
                break;
            }
            if bits_left == 0 {
                bits = rng.random::<u64>();
                bits_left = 64;
            }
            let go_right = bits & 1 == 1;
            bits >>= 1;
            bits_left -= 1;
            pos = if go_right { right[pos] } else { left[pos] };
        }
        if !bad {
            // Ran out of horizon without settling: classify by where the
            // walk stands now.
            bad = settled[pos] == Some(true);
        }
        if bad {
            bad_walks += 1;
        }
    }
    bad_walks as f64 / samples as f64
}

/// For each node: `Some(bad)` when it belongs to a bottom component of
/// inner nodes, `None` otherwise.
fn bottom_membership(a: &SubzeroAutomaton, g: &RunGraph, ids: &[NodeId]) -> Vec<Option<bool>> {
    let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut settled = vec![None; ids.len()];
    // Iterative SCC on the inner subgraph restricted to non-port nodes.
    let inner: Vec<usize> = (0..ids.len())
        .filter(|&i| !g.node(ids[i]).unwrap().is_port())
        .collect();
    let inner_index: BTreeMap<usize, usize> =
        inner.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let succs: Vec<Vec<usize>> = inner
        .iter()
        .map(|&i| match g.node(ids[i]).unwrap() {
            RunNode::Inner { left, right, .. } => [left, right]
                .into_iter()
                .filter_map(|c| inner_index.get(&index[c]).copied())
                .collect(),
            RunNode::Port { .. } => unreachable!(),
        })
        .collect();
    let exits: Vec<bool> = inner
        .iter()
        .map(|&i| match g.node(ids[i]).unwrap() {
            RunNode::Inner { left, right, .. } => [left, right]
                .into_iter()
                .any(|c| g.node(*c).unwrap().is_port()),
            RunNode::Port { .. } => unreachable!(),
        })
        .collect();

    for component in simple_sccs(inner.len(), &succs) {
        let bottom = component.iter().all(|&k| {
            !exits[k] && succs[k].iter().all(|x| component.contains(x))
        });
        let cyclic = component.len() > 1 || succs[component[0]].contains(&component[0]);
        if !bottom || !cyclic {
            continue;
        }
        let max_state = component
            .iter()
            .map(|&k| g.node(ids[inner[k]]).unwrap().state())
            .max()
            .expect("nonempty component");
        let bad = a.is_zero(max_state);
        for &k in &component {
            settled[inner[k]] = Some(bad);
        }
    }
    settled
}

fn simple_sccs(n: usize, succs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // Small graphs only; recursive Tarjan.
    struct S<'a> {
        succs: &'a [Vec<usize>],
        index: usize,
        indices: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut S, v: usize) {
        s.indices[v] = Some(s.index);
        s.low[v] = s.index;
        s.index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.succs[v] {
            match s.indices[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(i) if s.on_stack[w] => s.low[v] = s.low[v].min(i),
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
            s.out.push(component);
        }
    }
    let mut s = S {
        succs,
        index: 0,
        indices: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if s.indices[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Parameters for the seeded random automaton generator.
#[derive(Debug, Clone, Copy)]
pub struct RandomAutomatonConfig {
    pub num_states: usize,
    pub num_letters: usize,
    pub num_transitions: usize,
    /// Probability that a state joins `Q_all`.
    pub p_all: f64,
    /// Probability that a state joins `Q_zero`.
    pub p_zero: f64,
}

pub fn random_automaton(rng: &mut impl Rng, cfg: &RandomAutomatonConfig) -> SubzeroAutomaton {
    let universe = cfg.num_states * cfg.num_letters * cfg.num_states * cfg.num_states;
    let wanted = cfg.num_transitions.min(universe);
    let mut transitions = BTreeSet::new();
    while transitions.len() < wanted {
        transitions.insert(Transition {
            source: StateId(rng.random_range(0..cfg.num_states)),
            letter: LetterId(rng.random_range(0..cfg.num_letters)),
            left: StateId(rng.random_range(0..cfg.num_states)),
            right: StateId(rng.random_range(0..cfg.num_states)),
        });
    }
    let mut q_all = BTreeSet::new();
    let mut q_zero = BTreeSet::new();
    for q in 0..cfg.num_states {
        if rng.random_bool(cfg.p_all) {
            q_all.insert(StateId(q));
        }
        if rng.random_bool(cfg.p_zero) {
            q_zero.insert(StateId(q));
        }
    }
    SubzeroAutomaton::new(
        (0..cfg.num_states).map(|i| format!("q{i}")).collect(),
        (0..cfg.num_letters)
            .map(|i| {
                char::from_u32('a' as u32 + i as u32)
                    .expect("small alphabet")
                    .to_string()
            })
            .collect(),
        transitions.into_iter().collect(),
        q_all,
        q_zero,
    )
}

/// Parameters for the seeded random run graph generator. The automaton is
/// synthesized from the graph's own inner nodes, so the result is always
/// transition-consistent.
#[derive(Debug, Clone, Copy)]
pub struct RandomRunGraphConfig {
    pub max_nodes: usize,
    pub num_states: usize,
    pub num_letters: usize,
    /// Probability that a non-root node is a port.
    pub port_probability: f64,
    pub p_all: f64,
    pub p_zero: f64,
}

pub fn random_run_graph(
    rng: &mut impl Rng,
    cfg: &RandomRunGraphConfig,
) -> (SubzeroAutomaton, RunGraph) {
    let n = rng.random_range(1..=cfg.max_nodes);
    let kinds: Vec<bool> = (0..n)
        .map(|i| i > 0 && rng.random_bool(cfg.port_probability))
        .collect();
    let mut nodes = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    for (i, &is_port) in kinds.iter().enumerate() {
        let state = StateId(rng.random_range(0..cfg.num_states));
        let node = if is_port {
            RunNode::Port { state }
        } else {
            let letter = LetterId(rng.random_range(0..cfg.num_letters));
            let left = NodeId(rng.random_range(0..n));
            let right = NodeId(rng.random_range(0..n));
            RunNode::Inner {
                state,
                letter,
                left,
                right,
            }
        };
        nodes.insert(NodeId(i), node);
    }
    for node in nodes.values() {
        if let RunNode::Inner {
            state,
            letter,
            left,
            right,
        } = node
        {
            transitions.insert(Transition {
                source: *state,
                letter: *letter,
                left: nodes[left].state(),
                right: nodes[right].state(),
            });
        }
    }
    let mut q_all = BTreeSet::new();
    let mut q_zero = BTreeSet::new();
    for q in 0..cfg.num_states {
        if rng.random_bool(cfg.p_all) {
            q_all.insert(StateId(q));
        }
        if rng.random_bool(cfg.p_zero) {
            q_zero.insert(StateId(q));
        }
    }
    let automaton = SubzeroAutomaton::new(
        (0..cfg.num_states).map(|i| format!("q{i}")).collect(),
        (0..cfg.num_letters)
            .map(|i| {
                char::from_u32('a' as u32 + i as u32)
                    .expect("small alphabet")
                    .to_string()
            })
            .collect(),
        transitions.into_iter().collect(),
        q_all,
        q_zero,
    );
    (automaton, RunGraph::new(nodes, NodeId(0)))
}

/// Deterministic generator entry point used by tests and the CLI.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::validate_derivation;
    use crate::examples::{make_branching_fragment, make_example12};
    use crate::multiset::Multiset;

    fn profile(a: &SubzeroAutomaton, root: &str, bound: &str, ports: &[&str]) -> Profile {
        Profile::new(
            a.state_by_name(root).unwrap(),
            a.state_by_name(bound).unwrap(),
            Multiset::from_states(
                a.num_states(),
                &ports
                    .iter()
                    .map(|n| a.state_by_name(n).unwrap())
                    .collect::<Vec<_>>(),
            ),
        )
    }

    #[test]
    fn finds_example12_empty_profile_within_caps() {
        let a = make_example12();
        let target = profile(&a, "q", "q", &[]);
        let caps = EnumerationCaps::new(12, 3, 1);
        let d = enumerate_derivations(&a, &target, &caps).unwrap().unwrap();
        assert!(validate_derivation(&a, &d).is_ok());
        assert_eq!(d.conclusion(), &target);
        assert!(d.size() <= 9);
    }

    #[test]
    fn no_transitions_means_not_found() {
        let a = SubzeroAutomaton::from_names(&["q"], &["a"], &[], &[], &[]).unwrap();
        let target = Profile::new(StateId(0), StateId(0), Multiset::empty(1));
        let caps = EnumerationCaps::new(8, 2, 1);
        assert_eq!(enumerate_derivations(&a, &target, &caps).unwrap(), None);
    }

    #[test]
    fn finds_branching_profile_within_caps() {
        let a = make_branching_fragment();
        let target = profile(&a, "p", "p", &["q1", "q2", "q3", "q4"]);
        let caps = EnumerationCaps::new(20, 3, 1);
        let d = enumerate_derivations(&a, &target, &caps).unwrap().unwrap();
        assert!(validate_derivation(&a, &d).is_ok());
        assert_eq!(d.conclusion(), &target);
    }

    #[test]
    fn finite_runs_examples() {
        let a = make_example12();
        let q = a.state_by_name("q").unwrap();
        let runs = enumerate_finite_runs(&a, q, 1).unwrap();
        assert!(runs.contains(&profile(&a, "q", "q", &["bot", "bot"])));
        assert!(runs.contains(&profile(&a, "q", "q", &["q", "q"])));

        assert!(enumerate_finite_runs(&a, q, 0).unwrap().is_empty());

        let frag = make_branching_fragment();
        let p = frag.state_by_name("p").unwrap();
        let runs = enumerate_finite_runs(&frag, p, 3).unwrap();
        assert!(runs.contains(&profile(
            &frag,
            "p",
            "p",
            &["q1", "q1", "q4", "q1", "q2", "q3", "q2"]
        )));
    }

    #[test]
    fn mc_degenerate_graphs() {
        // All-bad self-loop: every walk stays inside.
        let a = SubzeroAutomaton::from_names(
            &["q"],
            &["a"],
            &[("q", "a", "q", "q")],
            &["q"],
            &["q"],
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
        let g = RunGraph::new(nodes, NodeId(0));
        assert_eq!(mc_zero_measure(&a, &g, 1000, 50, 7), 1.0);

        // Example 12 witness graph: no bad bottom component anywhere.
        let e12 = make_example12();
        let bot = e12.state_by_name("bot").unwrap();
        let d1 = apply_d(apply_axiom(&e12, e12.transitions()[0]).unwrap(), bot).unwrap();
        let d2 = apply_wl(
            &e12,
            apply_d(apply_axiom(&e12, e12.transitions()[2]).unwrap(), bot).unwrap(),
        )
        .unwrap();
        let w = apply_u(d1, d2, bot).unwrap();
        let g = crate::realizer::realize(&e12, &w).unwrap();
        assert_eq!(mc_zero_measure(&e12, &g, 1000, 50, 7), 0.0);
    }

    #[test]
    fn mc_half_split_concentrates() {
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
        let estimate = mc_zero_measure(&a, &g, 100_000, 200, 42);
        assert!((estimate - 0.5).abs() <= 0.02, "estimate {estimate}");
    }

    #[test]
    fn generators_are_deterministic() {
        let cfg = RandomAutomatonConfig {
            num_states: 3,
            num_letters: 2,
            num_transitions: 6,
            p_all: 0.5,
            p_zero: 0.3,
        };
        let a1 = random_automaton(&mut seeded_rng(11), &cfg);
        let a2 = random_automaton(&mut seeded_rng(11), &cfg);
        assert_eq!(a1, a2);
        assert!(a1.validate().is_ok());

        let gcfg = RandomRunGraphConfig {
            max_nodes: 8,
            num_states: 3,
            num_letters: 2,
            port_probability: 0.3,
            p_all: 0.5,
            p_zero: 0.4,
        };
        let (a1, g1) = random_run_graph(&mut seeded_rng(5), &gcfg);
        let (a2, g2) = random_run_graph(&mut seeded_rng(5), &gcfg);
        assert_eq!(a1, a2);
        assert_eq!(g1, g2);
        assert!(a1.validate().is_ok());
        assert_eq!(g1.check_structure(), Ok(()));
    }
}
