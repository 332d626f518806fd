//! Profiles and the five-rule calculus that derives them.
//!
//! A profile `p -><=q w` asserts that a partial run exists with root state
//! `p`, every inner state at most `q`, and open ports forming the multiset
//! `w`. The rules are:
//!
//! * `A`  (axiom): a transition `(p, a, l, r)` yields `p -><=p {l, r}`.
//! * `WL` (weak looping): drop one `p` port from `p -><=p {p} u w` when
//!   `p` is in `Q_all` but not in `Q_zero`.
//! * `SL` (strong looping): same shape, `p` in `Q_all`, but the remaining
//!   ports `w` must be nonempty.
//! * `U`  (unification): plug `r -><=s v` into an `r` port of
//!   `p -><=q {r} u w`, concluding `p -><=max(q,s,r) w u v`.
//! * `D`  (deduplication): merge two ports of the same state.

use std::fmt;

use thiserror::Error;

use crate::automaton::{StateId, SubzeroAutomaton, Transition};
use crate::multiset::Multiset;

/// The judgement `root -><=bound ports`.
///
/// `bound` is an upper bound on the inner states of the realizing partial
/// run, not necessarily the exact maximum. Every rule preserves
/// `root <= bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub root: StateId,
    pub bound: StateId,
    pub ports: Multiset,
}

impl Profile {
    pub fn new(root: StateId, bound: StateId, ports: Multiset) -> Self {
        Self { root, bound, ports }
    }

    pub fn display(&self, a: &SubzeroAutomaton) -> String {
        format!(
            "{} -><={} {}",
            a.state_name(self.root),
            a.state_name(self.bound),
            self.ports.display(a)
        )
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -><={} {}", self.root, self.bound, self.ports)
    }
}

/// Rule tags, in the order used to break ties when several rules produce
/// the same conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Axiom,
    WeakLoop,
    StrongLoop,
    Unify,
    Dedup,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Axiom => "A",
            Rule::WeakLoop => "WL",
            Rule::StrongLoop => "SL",
            Rule::Unify => "U",
            Rule::Dedup => "D",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "A" => Rule::Axiom,
            "WL" => Rule::WeakLoop,
            "SL" => Rule::StrongLoop,
            "U" => Rule::Unify,
            "D" => Rule::Dedup,
            _ => return None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Why a rule application was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("transition is not in the automaton")]
    TransitionNotInAutomaton,
    #[error("premise root {root} differs from its bound {bound}")]
    RootBoundDiffer { root: StateId, bound: StateId },
    #[error("state {0} is not among the premise ports")]
    PortNotPresent(StateId),
    #[error("weak looping requires {0} in Q_all and outside Q_zero")]
    WeakLoopSideCondition(StateId),
    #[error("strong looping requires {0} in Q_all")]
    StrongLoopSideCondition(StateId),
    #[error("strong looping requires a remaining port")]
    EmptyRemainder,
    #[error("second premise root is {found}, expected {expected}")]
    PremiseRootMismatch { expected: StateId, found: StateId },
    #[error("state {0} has multiplicity below 2, nothing to deduplicate")]
    NothingToDeduplicate(StateId),
}

/// A derivation tree. Shared sub-derivations are duplicated; the size of a
/// derivation is its number of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    rule: Rule,
    conclusion: Profile,
    premises: Vec<Derivation>,
    /// The transition instantiating an axiom.
    transition: Option<Transition>,
    /// For `U` the unified port state, for `D` the deduplicated state.
    port: Option<StateId>,
}

impl Derivation {
    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn conclusion(&self) -> &Profile {
        &self.conclusion
    }

    pub fn premises(&self) -> &[Derivation] {
        &self.premises
    }

    pub fn transition(&self) -> Option<Transition> {
        self.transition
    }

    pub fn port(&self) -> Option<StateId> {
        self.port
    }

    /// Number of vertices of the derivation tree.
    pub fn size(&self) -> u64 {
        1 + self.premises.iter().map(Derivation::size).sum::<u64>()
    }

    /// Assembles a derivation from parts without checking the rule shapes.
    /// Intended for decoding; run [`validate_derivation`] afterwards.
    pub fn from_raw_parts(
        rule: Rule,
        conclusion: Profile,
        premises: Vec<Derivation>,
        transition: Option<Transition>,
        port: Option<StateId>,
    ) -> Self {
        Self {
            rule,
            conclusion,
            premises,
            transition,
            port,
        }
    }
}

fn axiom_profile(a: &SubzeroAutomaton, t: &Transition) -> Profile {
    Profile::new(
        t.source,
        t.source,
        Multiset::from_states(a.num_states(), &[t.left, t.right]),
    )
}

/// The looping premise shape shared by `WL` and `SL`: root and bound agree
/// and the root occurs among the ports.
fn looping_remainder(premise: &Profile) -> Result<Multiset, RuleError> {
    let p = premise.root;
    if premise.bound != p {
        return Err(RuleError::RootBoundDiffer {
            root: premise.root,
            bound: premise.bound,
        });
    }
    premise
        .ports
        .remove_one(p)
        .map_err(|_| RuleError::PortNotPresent(p))
}

/// Conclusion of `WL` applied to `premise`, or the reason it does not apply.
pub fn rule_wl(a: &SubzeroAutomaton, premise: &Profile) -> Result<Profile, RuleError> {
    let p = premise.root;
    let w = looping_remainder(premise)?;
    if !a.is_all(p) || a.is_zero(p) {
        return Err(RuleError::WeakLoopSideCondition(p));
    }
    Ok(Profile::new(p, p, w))
}

/// Conclusion of `SL` applied to `premise`.
pub fn rule_sl(a: &SubzeroAutomaton, premise: &Profile) -> Result<Profile, RuleError> {
    let p = premise.root;
    let w = looping_remainder(premise)?;
    if !a.is_all(p) {
        return Err(RuleError::StrongLoopSideCondition(p));
    }
    if w.is_empty() {
        return Err(RuleError::EmptyRemainder);
    }
    Ok(Profile::new(p, p, w))
}

/// Conclusion of `U` on the two premises at port `r`.
pub fn rule_u(premise1: &Profile, premise2: &Profile, r: StateId) -> Result<Profile, RuleError> {
    let w = premise1
        .ports
        .remove_one(r)
        .map_err(|_| RuleError::PortNotPresent(r))?;
    if premise2.root != r {
        return Err(RuleError::PremiseRootMismatch {
            expected: r,
            found: premise2.root,
        });
    }
    let bound = premise1.bound.max(premise2.bound).max(r);
    Ok(Profile::new(premise1.root, bound, w.sum(&premise2.ports)))
}

/// Conclusion of `D` at state `r`.
pub fn rule_d(premise: &Profile, r: StateId) -> Result<Profile, RuleError> {
    if premise.ports.count(r) < 2 {
        return Err(RuleError::NothingToDeduplicate(r));
    }
    Ok(Profile::new(
        premise.root,
        premise.bound,
        premise.ports.remove_one(r).expect("count checked"),
    ))
}

/// Leaf derivation for a transition of the automaton.
pub fn apply_axiom(a: &SubzeroAutomaton, t: Transition) -> Result<Derivation, RuleError> {
    if !a.has_transition(&t) {
        return Err(RuleError::TransitionNotInAutomaton);
    }
    Ok(Derivation {
        rule: Rule::Axiom,
        conclusion: axiom_profile(a, &t),
        premises: Vec::new(),
        transition: Some(t),
        port: None,
    })
}

pub fn apply_wl(a: &SubzeroAutomaton, premise: Derivation) -> Result<Derivation, RuleError> {
    let conclusion = rule_wl(a, premise.conclusion())?;
    Ok(Derivation {
        rule: Rule::WeakLoop,
        conclusion,
        premises: vec![premise],
        transition: None,
        port: None,
    })
}

pub fn apply_sl(a: &SubzeroAutomaton, premise: Derivation) -> Result<Derivation, RuleError> {
    let conclusion = rule_sl(a, premise.conclusion())?;
    Ok(Derivation {
        rule: Rule::StrongLoop,
        conclusion,
        premises: vec![premise],
        transition: None,
        port: None,
    })
}

pub fn apply_u(d1: Derivation, d2: Derivation, r: StateId) -> Result<Derivation, RuleError> {
    let conclusion = rule_u(d1.conclusion(), d2.conclusion(), r)?;
    Ok(Derivation {
        rule: Rule::Unify,
        conclusion,
        premises: vec![d1, d2],
        transition: None,
        port: Some(r),
    })
}

pub fn apply_d(premise: Derivation, r: StateId) -> Result<Derivation, RuleError> {
    let conclusion = rule_d(premise.conclusion(), r)?;
    Ok(Derivation {
        rule: Rule::Dedup,
        conclusion,
        premises: vec![premise],
        transition: None,
        port: Some(r),
    })
}

/// Number of vertices of a derivation tree.
pub fn derivation_size(d: &Derivation) -> u64 {
    d.size()
}

/// A broken node inside a derivation, addressed by the child indices
/// leading to it from the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationViolation {
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for DerivationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self
            .path
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".");
        write!(
            f,
            "at {}: {}",
            if path.is_empty() { "root" } else { &path },
            self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationReport {
    pub violations: Vec<DerivationViolation>,
}

impl DerivationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks every node of `d`: the conclusion must be exactly what the
/// rule produces from the stored premises under `a`.
pub fn validate_derivation(a: &SubzeroAutomaton, d: &Derivation) -> DerivationReport {
    let mut report = DerivationReport::default();
    let mut path = Vec::new();
    check_node(a, d, &mut path, &mut report);
    report
}

fn check_node(
    a: &SubzeroAutomaton,
    d: &Derivation,
    path: &mut Vec<usize>,
    report: &mut DerivationReport,
) {
    let mut fail = |message: String| {
        report.violations.push(DerivationViolation {
            path: path.clone(),
            message,
        });
    };
    let arity = match d.rule {
        Rule::Axiom => 0,
        Rule::WeakLoop | Rule::StrongLoop | Rule::Dedup => 1,
        Rule::Unify => 2,
    };
    if d.premises.len() != arity {
        fail(format!(
            "rule {} expects {} premises, found {}",
            d.rule,
            arity,
            d.premises.len()
        ));
        return;
    }
    if d.transition.is_some() != matches!(d.rule, Rule::Axiom) {
        fail(format!("rule {} has a misplaced transition witness", d.rule));
    }
    if d.port.is_some() != matches!(d.rule, Rule::Unify | Rule::Dedup) {
        fail(format!("rule {} has a misplaced port witness", d.rule));
    }
    let expected = match d.rule {
        Rule::Axiom => match d.transition {
            Some(t) if a.has_transition(&t) => Ok(axiom_profile(a, &t)),
            Some(_) => Err(RuleError::TransitionNotInAutomaton),
            None => return,
        },
        Rule::WeakLoop => rule_wl(a, d.premises[0].conclusion()),
        Rule::StrongLoop => rule_sl(a, d.premises[0].conclusion()),
        Rule::Unify => match d.port {
            Some(r) => rule_u(d.premises[0].conclusion(), d.premises[1].conclusion(), r),
            None => return,
        },
        Rule::Dedup => match d.port {
            Some(r) => rule_d(d.premises[0].conclusion(), r),
            None => return,
        },
    };
    match expected {
        Ok(p) if p == d.conclusion => {}
        Ok(p) => fail(format!(
            "conclusion is {}, rule {} yields {}",
            d.conclusion.display(a),
            d.rule,
            p.display(a)
        )),
        Err(e) => fail(format!("rule {} does not apply: {e}", d.rule)),
    }
    for (i, premise) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(a, premise, path, report);
        path.pop();
    }
}
