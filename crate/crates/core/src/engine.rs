//! Derivability and regular emptiness by fixpoint saturation.
//!
//! The saturation runs in two layers. The first closes the exact multiset
//! calculus under a configurable search budget (largest multiplicity and
//! largest port count an intermediate conclusion may have). The second
//! projects everything to deduplication-normalized profiles and closes the
//! projection under set-level variants of the rules:
//!
//! * looping on `(p, p, S)` with `p in S` drops `p` from `S`;
//! * unification of `(p, q, S)` at `r in S` with `(r, s, V)` yields
//!   `(p, max(q,s,r), (S \ {r}) u V)`.
//!
//! Every set-level step expands into deduplications followed by one
//! ordinary rule, so each derived normal profile carries an exact
//! multiset-calculus witness; reported results are sound unconditionally.
//! Completeness relative to the budget is cross-validated against the
//! brute-force oracle in the test suite. Raising the limits only ever
//! grows the derived set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automaton::{StateId, SubzeroAutomaton, Transition};
use crate::calculus::{
    apply_axiom, apply_d, apply_sl, apply_u, apply_wl, rule_d, rule_sl, rule_u, rule_wl,
    Derivation, Profile,
};
use crate::multiset::Multiset;

/// A profile with its port multiset collapsed to the support set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalProfile {
    pub root: StateId,
    pub bound: StateId,
    pub ports: BTreeSet<StateId>,
}

impl NormalProfile {
    pub fn display(&self, a: &SubzeroAutomaton) -> String {
        let ports = self
            .ports
            .iter()
            .map(|&q| a.state_name(q).to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{} -><={} {{{ports}}}",
            a.state_name(self.root),
            a.state_name(self.bound)
        )
    }
}

impl fmt::Display for NormalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -><={} {{", self.root, self.bound)?;
        for (i, q) in self.ports.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// Exhaustive deduplication: keeps root and bound, collapses ports.
pub fn normalize(p: &Profile) -> NormalProfile {
    NormalProfile {
        root: p.root,
        bound: p.bound,
        ports: p.ports.support().collect(),
    }
}

/// Budget for the multiset saturation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationLimits {
    /// Largest multiplicity any intermediate conclusion may carry.
    pub max_multiplicity: u64,
    /// Largest total port count of any intermediate conclusion.
    pub max_ports: u64,
}

impl SaturationLimits {
    /// Default budget: multiplicities up to 3 and `2|Q| + 10` ports. Ample
    /// for every bundled automaton and for the oracle cross-check corpora.
    pub fn for_automaton(a: &SubzeroAutomaton) -> Self {
        SaturationLimits {
            max_multiplicity: 3,
            max_ports: 2 * a.num_states() as u64 + 10,
        }
    }
}

/// The rule application that first produced a multiset profile.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleInstance {
    Axiom {
        transition: Transition,
    },
    WeakLoop {
        premise: Profile,
    },
    StrongLoop {
        premise: Profile,
    },
    Unify {
        premise1: Profile,
        premise2: Profile,
        port: StateId,
    },
    Dedup {
        premise: Profile,
        port: StateId,
    },
}

/// How a normal profile entered the derived set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormalStep {
    /// Normalization of a profile derived by the multiset layer.
    Multiset { witness: Profile },
    /// Set-level weak looping on a derived normal profile.
    WeakLoop { premise: NormalProfile },
    /// Set-level strong looping on a derived normal profile.
    StrongLoop { premise: NormalProfile },
    /// Set-level unification.
    Unify {
        premise1: NormalProfile,
        premise2: NormalProfile,
        port: StateId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("profile is not derived; no witness")]
    NoWitness,
}

/// Verdict of the regular emptiness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Some regular tree is accepted; the witness derivation concludes
    /// `q0 -><=q {}` and realizes to an accepting run graph.
    NonEmpty(Derivation),
    Empty,
}

impl Verdict {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, Verdict::NonEmpty(_))
    }
}

/// The saturated closure plus the provenance needed to rebuild witnesses.
#[derive(Debug, Clone)]
pub struct SaturationResult {
    automaton: SubzeroAutomaton,
    multiset_table: BTreeMap<Profile, (u32, RuleInstance)>,
    normal_table: BTreeMap<NormalProfile, NormalStep>,
    truncated: bool,
}

impl SaturationResult {
    /// All derived normal profiles, ascending.
    pub fn derived(&self) -> impl Iterator<Item = &NormalProfile> {
        self.normal_table.keys()
    }

    pub fn len(&self) -> usize {
        self.normal_table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normal_table.is_empty()
    }

    pub fn contains(&self, p: &NormalProfile) -> bool {
        self.normal_table.contains_key(p)
    }

    /// The step that first produced `p`, if derived.
    pub fn provenance(&self, p: &NormalProfile) -> Option<&NormalStep> {
        self.normal_table.get(p)
    }

    /// Multiset profiles derived by the first layer, with the round and
    /// rule application that first produced each.
    pub fn multiset_profiles(&self) -> impl Iterator<Item = (&Profile, &RuleInstance)> {
        self.multiset_table.iter().map(|(p, (_, inst))| (p, inst))
    }

    /// Whether some rule application was pruned by the limits. A truncated
    /// saturation is still sound; it may just derive fewer profiles.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Rebuilds a multiset-calculus derivation whose normalized conclusion
    /// is `target`.
    pub fn witness(&self, target: &NormalProfile) -> Result<Derivation, EngineError> {
        if !self.contains(target) {
            return Err(EngineError::NoWitness);
        }
        let mut memo_m: BTreeMap<Profile, Derivation> = BTreeMap::new();
        let mut memo_n: BTreeMap<NormalProfile, Derivation> = BTreeMap::new();
        Ok(self.build_normal(target, &mut memo_m, &mut memo_n))
    }

    /// Witnesses for every derived profile, sharing the rebuild memo.
    pub fn all_witnesses(&self) -> Vec<(NormalProfile, Derivation)> {
        let mut memo_m: BTreeMap<Profile, Derivation> = BTreeMap::new();
        let mut memo_n: BTreeMap<NormalProfile, Derivation> = BTreeMap::new();
        self.normal_table
            .keys()
            .map(|np| {
                (
                    np.clone(),
                    self.build_normal(np, &mut memo_m, &mut memo_n),
                )
            })
            .collect()
    }

    fn build_normal(
        &self,
        np: &NormalProfile,
        memo_m: &mut BTreeMap<Profile, Derivation>,
        memo_n: &mut BTreeMap<NormalProfile, Derivation>,
    ) -> Derivation {
        if let Some(d) = memo_n.get(np) {
            return d.clone();
        }
        let a = &self.automaton;
        let step = self.normal_table.get(np).expect("derived profile");
        let d = match step.clone() {
            NormalStep::Multiset { witness } => self.build_multiset(&witness, memo_m),
            NormalStep::WeakLoop { premise } => {
                let d = self.dedup_to_one(self.build_normal(&premise, memo_m, memo_n), np.root);
                apply_wl(a, d).expect("recorded weak looping step applies")
            }
            NormalStep::StrongLoop { premise } => {
                let d = self.dedup_to_one(self.build_normal(&premise, memo_m, memo_n), np.root);
                apply_sl(a, d).expect("recorded strong looping step applies")
            }
            NormalStep::Unify {
                premise1,
                premise2,
                port,
            } => {
                let d1 = self.dedup_to_one(self.build_normal(&premise1, memo_m, memo_n), port);
                let d2 = self.build_normal(&premise2, memo_m, memo_n);
                apply_u(d1, d2, port).expect("recorded unification step applies")
            }
        };
        debug_assert_eq!(&normalize(d.conclusion()), np);
        memo_n.insert(np.clone(), d.clone());
        d
    }

    fn build_multiset(&self, p: &Profile, memo_m: &mut BTreeMap<Profile, Derivation>) -> Derivation {
        if let Some(d) = memo_m.get(p) {
            return d.clone();
        }
        let a = &self.automaton;
        let (_, inst) = self.multiset_table.get(p).expect("derived profile");
        let d = match inst.clone() {
            RuleInstance::Axiom { transition } => {
                apply_axiom(a, transition).expect("recorded axiom applies")
            }
            RuleInstance::WeakLoop { premise } => {
                apply_wl(a, self.build_multiset(&premise, memo_m)).expect("recorded step applies")
            }
            RuleInstance::StrongLoop { premise } => {
                apply_sl(a, self.build_multiset(&premise, memo_m)).expect("recorded step applies")
            }
            RuleInstance::Unify {
                premise1,
                premise2,
                port,
            } => {
                let d1 = self.build_multiset(&premise1, memo_m);
                let d2 = self.build_multiset(&premise2, memo_m);
                apply_u(d1, d2, port).expect("recorded step applies")
            }
            RuleInstance::Dedup { premise, port } => {
                apply_d(self.build_multiset(&premise, memo_m), port).expect("recorded step applies")
            }
        };
        debug_assert_eq!(d.conclusion(), p);
        memo_m.insert(p.clone(), d.clone());
        d
    }

    /// Deduplicates `state` in the conclusion down to one occurrence.
    fn dedup_to_one(&self, mut d: Derivation, state: StateId) -> Derivation {
        while d.conclusion().ports.count(state) > 1 {
            d = apply_d(d, state).expect("multiplicity checked");
        }
        d
    }
}

/// Saturates with the default limits.
pub fn saturate(a: &SubzeroAutomaton) -> Result<SaturationResult, EngineError> {
    saturate_with(a, SaturationLimits::for_automaton(a))
}

/// Saturates the calculus under the given budget.
pub fn saturate_with(
    a: &SubzeroAutomaton,
    limits: SaturationLimits,
) -> Result<SaturationResult, EngineError> {
    let report = a.validate();
    if !report.is_ok() {
        return Err(EngineError::InvalidAutomaton(report.to_string()));
    }

    let mut truncated = false;
    let mut table: BTreeMap<Profile, (u32, RuleInstance)> = BTreeMap::new();
    // Premise-2 candidates for unification, keyed by their root.
    let mut by_root: BTreeMap<StateId, Vec<Profile>> = BTreeMap::new();
    // Premise-1 candidates, keyed by each state in their port support.
    let mut by_port: BTreeMap<StateId, Vec<Profile>> = BTreeMap::new();

    let within = |ports: &Multiset, truncated: &mut bool| {
        if ports.max_multiplicity() <= limits.max_multiplicity && ports.len() <= limits.max_ports {
            true
        } else {
            *truncated = true;
            false
        }
    };

    // Round 0: axioms, smallest transition first.
    let mut candidates: BTreeMap<Profile, RuleInstance> = BTreeMap::new();
    let mut transitions = a.transitions().to_vec();
    transitions.sort();
    for t in transitions {
        let d = apply_axiom(a, t).expect("listed transition");
        let profile = d.conclusion().clone();
        if !within(&profile.ports, &mut truncated) {
            continue;
        }
        let inst = RuleInstance::Axiom { transition: t };
        merge_min(&mut candidates, profile, inst);
    }

    let mut round = 0u32;
    while !candidates.is_empty() {
        let mut frontier = Vec::with_capacity(candidates.len());
        for (profile, inst) in std::mem::take(&mut candidates) {
            by_root
                .entry(profile.root)
                .or_default()
                .push(profile.clone());
            for q in profile.ports.support() {
                by_port.entry(q).or_default().push(profile.clone());
            }
            table.insert(profile.clone(), (round, inst));
            frontier.push(profile);
        }
        round += 1;

        for p in &frontier {
            if let Ok(c) = rule_wl(a, p) {
                if within(&c.ports, &mut truncated) && !table.contains_key(&c) {
                    merge_min(&mut candidates, c, RuleInstance::WeakLoop { premise: p.clone() });
                }
            }
            if let Ok(c) = rule_sl(a, p) {
                if within(&c.ports, &mut truncated) && !table.contains_key(&c) {
                    merge_min(
                        &mut candidates,
                        c,
                        RuleInstance::StrongLoop { premise: p.clone() },
                    );
                }
            }
            for r in p.ports.support().collect::<Vec<_>>() {
                if let Ok(c) = rule_d(p, r) {
                    if within(&c.ports, &mut truncated) && !table.contains_key(&c) {
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
                // New premise1 against every derived premise2.
                if let Some(partners) = by_root.get(&r) {
                    for p2 in partners {
                        unify_candidate(p, p2, r, limits, &table, &mut candidates, &mut truncated);
                    }
                }
            }
            // New premise2 against every derived premise1 holding its root.
            if let Some(partners) = by_port.get(&p.root) {
                for p1 in partners.clone() {
                    unify_candidate(&p1, p, p.root, limits, &table, &mut candidates, &mut truncated);
                }
            }
        }
    }

    // Project to normal profiles; the representative of each is the
    // earliest (round, profile) pair, which keeps witnesses small.
    let mut normal_table: BTreeMap<NormalProfile, NormalStep> = BTreeMap::new();
    let mut best: BTreeMap<NormalProfile, (u32, Profile)> = BTreeMap::new();
    for (profile, (round, _)) in &table {
        let np = normalize(profile);
        let key = (*round, profile.clone());
        match best.get(&np) {
            Some(existing) if *existing <= key => {}
            _ => {
                best.insert(np, key);
            }
        }
    }
    for (np, (_, witness)) in best {
        normal_table.insert(np, NormalStep::Multiset { witness });
    }

    // Close the normalized set under the set-level rules. Each addition is
    // justified by deduplications plus one ordinary rule, applied when the
    // witness is rebuilt.
    let mut normal_candidates: BTreeMap<NormalProfile, NormalStep> = BTreeMap::new();
    let mut normals_by_root: BTreeMap<StateId, Vec<NormalProfile>> = BTreeMap::new();
    let mut normals_by_port: BTreeMap<StateId, Vec<NormalProfile>> = BTreeMap::new();
    let mut frontier: Vec<NormalProfile> = normal_table.keys().cloned().collect();
    loop {
        for np in &frontier {
            normals_by_root.entry(np.root).or_default().push(np.clone());
            for &q in &np.ports {
                normals_by_port.entry(q).or_default().push(np.clone());
            }
        }
        for np in &frontier {
            set_loop_candidates(a, np, &normal_table, &mut normal_candidates);
            for &r in &np.ports {
                if let Some(partners) = normals_by_root.get(&r) {
                    for p2 in partners.clone() {
                        set_unify_candidate(np, &p2, r, &normal_table, &mut normal_candidates);
                    }
                }
            }
            if let Some(partners) = normals_by_port.get(&np.root) {
                for p1 in partners.clone() {
                    set_unify_candidate(&p1, np, np.root, &normal_table, &mut normal_candidates);
                }
            }
        }
        if normal_candidates.is_empty() {
            break;
        }
        frontier = Vec::with_capacity(normal_candidates.len());
        for (np, step) in std::mem::take(&mut normal_candidates) {
            normal_table.insert(np.clone(), step);
            frontier.push(np);
        }
    }

    Ok(SaturationResult {
        automaton: a.clone(),
        multiset_table: table,
        normal_table,
        truncated,
    })
}

fn merge_min<K: Ord, V: Ord>(map: &mut BTreeMap<K, V>, key: K, value: V) {
    match map.get(&key) {
        Some(existing) if *existing <= value => {}
        _ => {
            map.insert(key, value);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn unify_candidate(
    p1: &Profile,
    p2: &Profile,
    r: StateId,
    limits: SaturationLimits,
    table: &BTreeMap<Profile, (u32, RuleInstance)>,
    candidates: &mut BTreeMap<Profile, RuleInstance>,
    truncated: &mut bool,
) {
    let Ok(c) = rule_u(p1, p2, r) else {
        return;
    };
    if c.ports.max_multiplicity() > limits.max_multiplicity || c.ports.len() > limits.max_ports {
        *truncated = true;
        return;
    }
    if table.contains_key(&c) {
        return;
    }
    merge_min(
        candidates,
        c,
        RuleInstance::Unify {
            premise1: p1.clone(),
            premise2: p2.clone(),
            port: r,
        },
    );
}

fn set_loop_candidates(
    a: &SubzeroAutomaton,
    np: &NormalProfile,
    table: &BTreeMap<NormalProfile, NormalStep>,
    candidates: &mut BTreeMap<NormalProfile, NormalStep>,
) {
    let p = np.root;
    if np.bound != p || !np.ports.contains(&p) {
        return;
    }
    let mut ports = np.ports.clone();
    ports.remove(&p);
    let conclusion = NormalProfile {
        root: p,
        bound: p,
        ports,
    };
    if a.is_all(p) && !a.is_zero(p) && !table.contains_key(&conclusion) {
        merge_min(
            candidates,
            conclusion.clone(),
            NormalStep::WeakLoop {
                premise: np.clone(),
            },
        );
    }
    if a.is_all(p) && !conclusion.ports.is_empty() && !table.contains_key(&conclusion) {
        merge_min(
            candidates,
            conclusion,
            NormalStep::StrongLoop {
                premise: np.clone(),
            },
        );
    }
}

fn set_unify_candidate(
    p1: &NormalProfile,
    p2: &NormalProfile,
    r: StateId,
    table: &BTreeMap<NormalProfile, NormalStep>,
    candidates: &mut BTreeMap<NormalProfile, NormalStep>,
) {
    if !p1.ports.contains(&r) || p2.root != r {
        return;
    }
    let mut ports = p1.ports.clone();
    ports.remove(&r);
    ports.extend(p2.ports.iter().copied());
    let conclusion = NormalProfile {
        root: p1.root,
        bound: p1.bound.max(p2.bound).max(r),
        ports,
    };
    if table.contains_key(&conclusion) {
        return;
    }
    merge_min(
        candidates,
        conclusion,
        NormalStep::Unify {
            premise1: p1.clone(),
            premise2: p2.clone(),
            port: r,
        },
    );
}

/// Whether `target` is derivable: its normalization lies in the saturated
/// closure. Ill-formed targets (out-of-range states, bound below root)
/// are simply not derivable.
pub fn derivable(a: &SubzeroAutomaton, target: &Profile) -> Result<bool, EngineError> {
    if !a.valid_state(target.root)
        || !a.valid_state(target.bound)
        || target.ports.num_states() != a.num_states()
        || target.bound < target.root
    {
        return Ok(false);
    }
    let s = saturate(a)?;
    Ok(s.contains(&normalize(target)))
}

/// Decides whether the automaton accepts some regular tree from `q0`.
/// Nonempty iff some `(q0, q, {})` profile is derived, for any bound `q`;
/// the returned witness favors the smallest such bound.
pub fn decide_regular_emptiness(
    a: &SubzeroAutomaton,
    q0: StateId,
) -> Result<Verdict, EngineError> {
    if !a.valid_state(q0) {
        return Err(EngineError::InvalidState(q0.index()));
    }
    let s = saturate(a)?;
    decide_from(&s, q0)
}

/// Reads the verdict for `q0` off an existing saturation.
pub fn decide_from(s: &SaturationResult, q0: StateId) -> Result<Verdict, EngineError> {
    let hit = s
        .normal_table
        .keys()
        .find(|np| np.root == q0 && np.ports.is_empty());
    match hit {
        Some(np) => Ok(Verdict::NonEmpty(s.witness(&np.clone())?)),
        None => Ok(Verdict::Empty),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::validate_derivation;
    use crate::examples::{make_branching_fragment, make_example12, make_l3, make_parity};

    fn np(a: &SubzeroAutomaton, root: &str, bound: &str, ports: &[&str]) -> NormalProfile {
        NormalProfile {
            root: a.state_by_name(root).unwrap(),
            bound: a.state_by_name(bound).unwrap(),
            ports: ports
                .iter()
                .map(|n| a.state_by_name(n).unwrap())
                .collect(),
        }
    }

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
    fn normalize_examples() {
        let frag = make_branching_fragment();
        let p = profile(
            &frag,
            "p",
            "p",
            &["q1", "q1", "q4", "q1", "q2", "q3", "q2"],
        );
        assert_eq!(normalize(&p), np(&frag, "p", "p", &["q1", "q2", "q3", "q4"]));

        let e12 = make_example12();
        let p = profile(&e12, "bot", "q", &[]);
        assert_eq!(normalize(&p), np(&e12, "bot", "q", &[]));
        let p = profile(&e12, "q", "q", &["q", "q"]);
        assert_eq!(normalize(&p), np(&e12, "q", "q", &["q"]));
    }

    #[test]
    fn example12_saturation_contains_empty_profiles() {
        let a = make_example12();
        let s = saturate(&a).unwrap();
        assert!(s.contains(&np(&a, "bot", "bot", &[])));
        assert!(s.contains(&np(&a, "q", "q", &[])));
    }

    #[test]
    fn l3_derives_no_empty_profile() {
        let a = make_l3();
        let s = saturate(&a).unwrap();
        for np in s.derived() {
            assert!(!np.ports.is_empty(), "unexpected {}", np.display(&a));
        }
    }

    #[test]
    fn empty_transition_relation_derives_nothing() {
        let a = SubzeroAutomaton::from_names(&["q"], &["a"], &[], &[], &[]).unwrap();
        let s = saturate(&a).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn derivable_examples() {
        let e12 = make_example12();
        assert!(derivable(&e12, &profile(&e12, "q", "q", &[])).unwrap());
        assert!(derivable(&e12, &profile(&e12, "bot", "bot", &[])).unwrap());
        // An axiom plus one deduplication keeps a q port alive.
        assert!(derivable(&e12, &profile(&e12, "q", "q", &["q"])).unwrap());
        // Nothing lets bot reach a q port.
        assert!(!derivable(&e12, &profile(&e12, "bot", "q", &["q"])).unwrap());

        let frag = make_branching_fragment();
        assert!(derivable(&frag, &profile(&frag, "p", "p", &["q1", "q2", "q3", "q4"])).unwrap());
        // Root without outgoing transitions derives nothing.
        assert!(!derivable(&frag, &profile(&frag, "q1", "q1", &[])).unwrap());
    }

    #[test]
    fn decide_examples() {
        let e12 = make_example12();
        let verdict = decide_regular_emptiness(&e12, e12.state_by_name("q").unwrap()).unwrap();
        match verdict {
            Verdict::NonEmpty(d) => {
                assert!(validate_derivation(&e12, &d).is_ok());
                let c = d.conclusion();
                assert_eq!(c.root, e12.state_by_name("q").unwrap());
                assert!(c.ports.is_empty());
                assert!(d.size() <= 12);
            }
            Verdict::Empty => panic!("expected a witness"),
        }

        let l3 = make_l3();
        for q in l3.states() {
            assert_eq!(decide_regular_emptiness(&l3, q).unwrap(), Verdict::Empty);
        }

        let parity = make_parity(&["q"], &["a"], &["q"], &[("q", "a", "q", "q")]).unwrap();
        assert!(decide_regular_emptiness(&parity, StateId(0))
            .unwrap()
            .is_nonempty());
    }

    #[test]
    fn q_all_empty_is_always_empty() {
        let a = make_parity(
            &["p", "q"],
            &["a"],
            &[],
            &[("p", "a", "q", "q"), ("q", "a", "p", "p"), ("q", "a", "q", "q")],
        )
        .unwrap();
        for q in a.states() {
            assert_eq!(decide_regular_emptiness(&a, q).unwrap(), Verdict::Empty);
        }
    }

    #[test]
    fn witnesses_validate_and_normalize_to_their_profile() {
        for a in [make_example12(), make_l3(), make_branching_fragment()] {
            let s = saturate(&a).unwrap();
            for target in s.derived().cloned().collect::<Vec<_>>() {
                let d = s.witness(&target).unwrap();
                assert!(
                    validate_derivation(&a, &d).is_ok(),
                    "witness for {} is broken",
                    target.display(&a)
                );
                assert_eq!(normalize(d.conclusion()), target);
            }
        }
    }

    #[test]
    fn derived_set_is_closed_under_set_rules() {
        for a in [make_example12(), make_l3(), make_branching_fragment()] {
            let s = saturate(&a).unwrap();
            let derived: BTreeSet<NormalProfile> = s.derived().cloned().collect();
            for p in &derived {
                // Looping.
                if p.bound == p.root && p.ports.contains(&p.root) {
                    let mut ports = p.ports.clone();
                    ports.remove(&p.root);
                    let c = NormalProfile {
                        root: p.root,
                        bound: p.bound,
                        ports,
                    };
                    let wl_ok = a.is_all(p.root) && !a.is_zero(p.root);
                    let sl_ok = a.is_all(p.root) && !c.ports.is_empty();
                    if wl_ok || sl_ok {
                        assert!(derived.contains(&c), "loop conclusion missing");
                    }
                }
                // Unification.
                for &r in &p.ports {
                    for p2 in derived.iter().filter(|p2| p2.root == r) {
                        let mut ports = p.ports.clone();
                        ports.remove(&r);
                        ports.extend(p2.ports.iter().copied());
                        let c = NormalProfile {
                            root: p.root,
                            bound: p.bound.max(p2.bound).max(r),
                            ports,
                        };
                        assert!(derived.contains(&c), "unify conclusion missing");
                    }
                }
            }
        }
    }

    #[test]
    fn bare_axiom_profile_has_single_node_witness() {
        let a = make_example12();
        let s = saturate(&a).unwrap();
        // The normalized axiom (q, q, {bot}) is witnessed by the axiom
        // itself: one vertex, no deduplication needed.
        let target = np(&a, "q", "q", &["bot"]);
        let w = s.witness(&target).unwrap();
        assert_eq!(w.size(), 1);
        assert_eq!(normalize(w.conclusion()), target);
        assert_eq!(
            s.witness(&np(&a, "q", "bot", &[])),
            Err(EngineError::NoWitness)
        );
    }

    #[test]
    fn saturation_ignores_transition_order() {
        let a = make_l3();
        let mut transitions = a.transitions().to_vec();
        transitions.reverse();
        let b = SubzeroAutomaton::new(
            a.state_names().to_vec(),
            a.letter_names().to_vec(),
            transitions,
            a.q_all().clone(),
            a.q_zero().clone(),
        );
        let sa = saturate(&a).unwrap();
        let sb = saturate(&b).unwrap();
        let da: Vec<_> = sa.derived().cloned().collect();
        let db: Vec<_> = sb.derived().cloned().collect();
        assert_eq!(da, db);
    }

    #[test]
    fn invalid_automaton_is_a_usage_error() {
        let mut q_zero = BTreeSet::new();
        q_zero.insert(StateId(5));
        let a = SubzeroAutomaton::new(
            vec!["q".to_string()],
            vec!["a".to_string()],
            vec![],
            BTreeSet::new(),
            q_zero,
        );
        assert!(matches!(
            saturate(&a),
            Err(EngineError::InvalidAutomaton(_))
        ));
    }
}
