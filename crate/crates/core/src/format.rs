//! File formats: the textual automaton format, JSON documents for
//! derivations and run graphs, and DOT export for run graphs.
//!
//! The automaton format is line oriented:
//!
//! ```text
//! # comment
//! states bot q          # ascending priority
//! alphabet a b
//! all bot q
//! zero q
//! start q               # optional
//! trans q a bot bot
//! trans q b q q
//! ```
//!
//! Identifiers match `[A-Za-z0-9_]+`. Unknown identifiers are parse errors
//! carrying 1-based line numbers. JSON documents carry a `format_version`
//! field; states and letters travel by name so the files remain readable
//! and stable under reordering of internal indexes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{StateId, SubzeroAutomaton, Transition};
use crate::calculus::{Derivation, Profile, Rule};
use crate::multiset::Multiset;
use crate::realizer::{NodeId, RunGraph, RunNode};

pub const FORMAT_VERSION: u32 = 1;

/// A parsed automaton file: the automaton plus the optional start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonDocument {
    pub automaton: SubzeroAutomaton,
    pub start: Option<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Document(String),
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line {
            line,
            message: message.into(),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the textual automaton format and checks the automaton's
/// structural invariants.
pub fn parse_automaton(text: &str) -> Result<AutomatonDocument, ParseError> {
    let doc = parse_automaton_raw(text)?;
    let report = doc.automaton.validate();
    if !report.is_ok() {
        return Err(ParseError::Document(format!("invalid automaton: {report}")));
    }
    Ok(doc)
}

/// Parses the textual automaton format without the final invariant check;
/// name resolution and syntax are still enforced.
pub fn parse_automaton_raw(text: &str) -> Result<AutomatonDocument, ParseError> {
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut all: Option<(usize, Vec<String>)> = None;
    let mut zero: Option<(usize, Vec<String>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut transitions: Vec<(usize, [String; 4])> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut words = line.split_whitespace();
        let Some(directive) = words.next() else {
            continue;
        };
        let rest: Vec<String> = words.map(|w| w.to_string()).collect();
        for w in &rest {
            if !is_identifier(w) {
                return Err(ParseError::at(line_no, format!("bad identifier `{w}`")));
            }
        }
        let set_once = |slot: &mut Option<(usize, Vec<String>)>,
                            what: &str|
         -> Result<(), ParseError> {
            if slot.is_some() {
                return Err(ParseError::at(line_no, format!("duplicate `{what}` directive")));
            }
            *slot = Some((line_no, rest.clone()));
            Ok(())
        };
        match directive {
            "states" => {
                if rest.is_empty() {
                    return Err(ParseError::at(line_no, "at least one state required"));
                }
                set_once(&mut states, "states")?;
            }
            "alphabet" => {
                if rest.is_empty() {
                    return Err(ParseError::at(line_no, "at least one letter required"));
                }
                set_once(&mut alphabet, "alphabet")?;
            }
            "all" => set_once(&mut all, "all")?,
            "zero" => set_once(&mut zero, "zero")?,
            "start" => {
                if rest.len() != 1 {
                    return Err(ParseError::at(line_no, "start takes exactly one state"));
                }
                if start.is_some() {
                    return Err(ParseError::at(line_no, "duplicate `start` directive"));
                }
                start = Some((line_no, rest[0].clone()));
            }
            "trans" => {
                if rest.len() != 4 {
                    return Err(ParseError::at(
                        line_no,
                        "trans takes: source letter left right",
                    ));
                }
                transitions.push((
                    line_no,
                    [
                        rest[0].clone(),
                        rest[1].clone(),
                        rest[2].clone(),
                        rest[3].clone(),
                    ],
                ));
            }
            other => {
                return Err(ParseError::at(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    let (states_line, state_names) =
        states.ok_or_else(|| ParseError::Document("missing `states` directive".into()))?;
    let (_, letter_names) =
        alphabet.ok_or_else(|| ParseError::Document("missing `alphabet` directive".into()))?;
    for (i, name) in state_names.iter().enumerate() {
        if state_names[..i].contains(name) {
            return Err(ParseError::at(
                states_line,
                format!("duplicate state `{name}`"),
            ));
        }
    }
    let find_state = |line: usize, name: &str| -> Result<StateId, ParseError> {
        state_names
            .iter()
            .position(|n| n == name)
            .map(StateId)
            .ok_or_else(|| ParseError::at(line, format!("unknown state `{name}`")))
    };
    let find_letter = |line: usize, name: &str| -> Result<crate::automaton::LetterId, ParseError> {
        letter_names
            .iter()
            .position(|n| n == name)
            .map(crate::automaton::LetterId)
            .ok_or_else(|| ParseError::at(line, format!("unknown letter `{name}`")))
    };

    let mut q_all = std::collections::BTreeSet::new();
    if let Some((line, names)) = all {
        for name in names {
            q_all.insert(find_state(line, &name)?);
        }
    }
    let mut q_zero = std::collections::BTreeSet::new();
    if let Some((line, names)) = zero {
        for name in names {
            q_zero.insert(find_state(line, &name)?);
        }
    }
    let mut trans = Vec::new();
    for (line, [src, letter, left, right]) in transitions {
        trans.push(Transition {
            source: find_state(line, &src)?,
            letter: find_letter(line, &letter)?,
            left: find_state(line, &left)?,
            right: find_state(line, &right)?,
        });
    }
    let start = match start {
        Some((line, name)) => Some(find_state(line, &name)?),
        None => None,
    };
    let automaton = SubzeroAutomaton::new(state_names, letter_names, trans, q_all, q_zero);
    Ok(AutomatonDocument { automaton, start })
}

/// Canonical rendering of an automaton document; `parse_automaton` is its
/// inverse.
pub fn serialize_automaton(doc: &AutomatonDocument) -> String {
    let a = &doc.automaton;
    let mut out = String::new();
    out.push_str(&format!("states {}\n", a.state_names().join(" ")));
    out.push_str(&format!("alphabet {}\n", a.letter_names().join(" ")));
    let set_line = |directive: &str, set: &std::collections::BTreeSet<StateId>| {
        let mut line = directive.to_string();
        for &q in set {
            line.push(' ');
            line.push_str(a.state_name(q));
        }
        line.push('\n');
        line
    };
    out.push_str(&set_line("all", a.q_all()));
    out.push_str(&set_line("zero", a.q_zero()));
    if let Some(start) = doc.start {
        out.push_str(&format!("start {}\n", a.state_name(start)));
    }
    for t in a.transitions() {
        out.push_str(&format!(
            "trans {} {} {} {}\n",
            a.state_name(t.source),
            a.letter_name(t.letter),
            a.state_name(t.left),
            a.state_name(t.right)
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("{0}")]
    Content(String),
}

// Wire representation of a derivation node.
#[derive(Serialize, Deserialize)]
struct DerivationDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    format_version: Option<u32>,
    rule: String,
    conclusion: ProfileDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<TransitionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    port: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<DerivationDto>,
}

#[derive(Serialize, Deserialize)]
struct ProfileDto {
    root: String,
    bound: String,
    ports: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TransitionDto {
    source: String,
    letter: String,
    left: String,
    right: String,
}

fn profile_to_dto(a: &SubzeroAutomaton, p: &Profile) -> ProfileDto {
    let mut ports = Vec::new();
    for (q, c) in p.ports.iter() {
        for _ in 0..c {
            ports.push(a.state_name(q).to_string());
        }
    }
    ProfileDto {
        root: a.state_name(p.root).to_string(),
        bound: a.state_name(p.bound).to_string(),
        ports,
    }
}

fn state_by_name(a: &SubzeroAutomaton, name: &str) -> Result<StateId, JsonError> {
    a.state_by_name(name)
        .ok_or_else(|| JsonError::Content(format!("unknown state `{name}`")))
}

fn profile_from_dto(a: &SubzeroAutomaton, dto: &ProfileDto) -> Result<Profile, JsonError> {
    let mut ports = Multiset::empty(a.num_states());
    for name in &dto.ports {
        ports.add(state_by_name(a, name)?, 1);
    }
    Ok(Profile::new(
        state_by_name(a, &dto.root)?,
        state_by_name(a, &dto.bound)?,
        ports,
    ))
}

fn derivation_to_dto(a: &SubzeroAutomaton, d: &Derivation, top: bool) -> DerivationDto {
    DerivationDto {
        format_version: top.then_some(FORMAT_VERSION),
        rule: d.rule().tag().to_string(),
        conclusion: profile_to_dto(a, d.conclusion()),
        transition: d.transition().map(|t| TransitionDto {
            source: a.state_name(t.source).to_string(),
            letter: a.letter_name(t.letter).to_string(),
            left: a.state_name(t.left).to_string(),
            right: a.state_name(t.right).to_string(),
        }),
        port: d.port().map(|q| a.state_name(q).to_string()),
        premises: d
            .premises()
            .iter()
            .map(|p| derivation_to_dto(a, p, false))
            .collect(),
    }
}

fn derivation_from_dto(a: &SubzeroAutomaton, dto: &DerivationDto) -> Result<Derivation, JsonError> {
    let rule = Rule::from_tag(&dto.rule)
        .ok_or_else(|| JsonError::Content(format!("unknown rule tag `{}`", dto.rule)))?;
    let conclusion = profile_from_dto(a, &dto.conclusion)?;
    let transition = match &dto.transition {
        Some(t) => Some(Transition {
            source: state_by_name(a, &t.source)?,
            letter: a
                .letter_by_name(&t.letter)
                .ok_or_else(|| JsonError::Content(format!("unknown letter `{}`", t.letter)))?,
            left: state_by_name(a, &t.left)?,
            right: state_by_name(a, &t.right)?,
        }),
        None => None,
    };
    let port = match &dto.port {
        Some(name) => Some(state_by_name(a, name)?),
        None => None,
    };
    let premises = dto
        .premises
        .iter()
        .map(|p| derivation_from_dto(a, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Derivation::from_raw_parts(
        rule, conclusion, premises, transition, port,
    ))
}

/// Renders a derivation as a JSON document.
pub fn derivation_to_json(a: &SubzeroAutomaton, d: &Derivation) -> String {
    let dto = derivation_to_dto(a, d, true);
    serde_json::to_string_pretty(&dto).expect("serializable")
}

/// Parses a derivation document. Shapes are not re-checked here; run
/// `validate_derivation` on the result.
pub fn derivation_from_json(a: &SubzeroAutomaton, text: &str) -> Result<Derivation, JsonError> {
    let dto: DerivationDto =
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    if let Some(v) = dto.format_version {
        if v != FORMAT_VERSION {
            return Err(JsonError::Version(v));
        }
    }
    derivation_from_dto(a, &dto)
}

#[derive(Serialize, Deserialize)]
struct RunGraphDto {
    format_version: u32,
    root: usize,
    nodes: Vec<RunNodeDto>,
}

#[derive(Serialize, Deserialize)]
struct RunNodeDto {
    id: usize,
    state: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    letter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<usize>,
}

/// Renders a run graph as a JSON document.
pub fn run_graph_to_json(a: &SubzeroAutomaton, g: &RunGraph) -> String {
    let nodes = g
        .nodes()
        .map(|(id, node)| match *node {
            RunNode::Inner {
                state,
                letter,
                left,
                right,
            } => RunNodeDto {
                id: id.index(),
                state: a.state_name(state).to_string(),
                kind: "inner".to_string(),
                letter: Some(a.letter_name(letter).to_string()),
                left: Some(left.index()),
                right: Some(right.index()),
            },
            RunNode::Port { state } => RunNodeDto {
                id: id.index(),
                state: a.state_name(state).to_string(),
                kind: "port".to_string(),
                letter: None,
                left: None,
                right: None,
            },
        })
        .collect();
    let dto = RunGraphDto {
        format_version: FORMAT_VERSION,
        root: g.root().index(),
        nodes,
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

/// Parses a run graph document; ids must be unique but need not be dense.
pub fn run_graph_from_json(a: &SubzeroAutomaton, text: &str) -> Result<RunGraph, JsonError> {
    let dto: RunGraphDto =
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    if dto.format_version != FORMAT_VERSION {
        return Err(JsonError::Version(dto.format_version));
    }
    let mut nodes = BTreeMap::new();
    for n in &dto.nodes {
        let state = state_by_name(a, &n.state)?;
        let node = match n.kind.as_str() {
            "inner" => {
                let letter_name = n
                    .letter
                    .as_ref()
                    .ok_or_else(|| JsonError::Content(format!("node {}: missing letter", n.id)))?;
                let letter = a.letter_by_name(letter_name).ok_or_else(|| {
                    JsonError::Content(format!("unknown letter `{letter_name}`"))
                })?;
                let left = n
                    .left
                    .ok_or_else(|| JsonError::Content(format!("node {}: missing left", n.id)))?;
                let right = n
                    .right
                    .ok_or_else(|| JsonError::Content(format!("node {}: missing right", n.id)))?;
                RunNode::Inner {
                    state,
                    letter,
                    left: NodeId(left),
                    right: NodeId(right),
                }
            }
            "port" => RunNode::Port { state },
            other => {
                return Err(JsonError::Content(format!(
                    "node {}: unknown kind `{other}`",
                    n.id
                )))
            }
        };
        if nodes.insert(NodeId(n.id), node).is_some() {
            return Err(JsonError::Content(format!("duplicate node id {}", n.id)));
        }
    }
    Ok(RunGraph::new(nodes, NodeId(dto.root)))
}

/// DOT rendering of a run graph: inner nodes as circles labeled
/// `state/letter`, ports as dashed boxes, edge labels `L` and `R`.
pub fn run_graph_to_dot(a: &SubzeroAutomaton, g: &RunGraph) -> String {
    let mut out = String::from("digraph run {\n");
    out.push_str("  rankdir=TB;\n");
    for (id, node) in g.nodes() {
        match *node {
            RunNode::Inner { state, letter, .. } => {
                out.push_str(&format!(
                    "  n{} [shape=circle, label=\"{}/{}\"];\n",
                    id.index(),
                    a.state_name(state),
                    a.letter_name(letter)
                ));
            }
            RunNode::Port { state } => {
                out.push_str(&format!(
                    "  n{} [shape=box, style=dashed, label=\"{}\"];\n",
                    id.index(),
                    a.state_name(state)
                ));
            }
        }
    }
    for (id, node) in g.nodes() {
        if let RunNode::Inner { left, right, .. } = *node {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"L\"];\n",
                id.index(),
                left.index()
            ));
            out.push_str(&format!(
                "  n{} -> n{} [label=\"R\"];\n",
                id.index(),
                right.index()
            ));
        }
    }
    out.push_str("}\n");
    out
}
