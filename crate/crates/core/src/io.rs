//! JSON automaton documents and Graphviz export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, EventId, StateInfo};
use crate::error::{Error, Result};
use crate::synthesis::ModularEditStructure;
use crate::tpo::{Kind, Tpo};

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDocument {
    pub name: String,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub observable: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub controllable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub initial: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub marked: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub secret: bool,
}

/// The on-disk form of an automaton. Transitions are
/// `[source, event, target]` triples; the event `"tau"` is the silent event
/// and may not be declared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub name: String,
    #[serde(default)]
    pub events: Vec<EventDocument>,
    pub states: Vec<StateDocument>,
    #[serde(default)]
    pub transitions: Vec<[String; 3]>,
}

impl TryFrom<AutomatonDocument> for Automaton {
    type Error = Error;

    fn try_from(doc: AutomatonDocument) -> Result<Automaton> {
        let at = |path: String, message: String| Error::Document { path, message };
        let mut a = Automaton::new(doc.name);
        for (i, e) in doc.events.into_iter().enumerate() {
            let event = EventId { name: e.name, observable: e.observable, controllable: e.controllable };
            if event.name.is_empty() {
                return Err(at(format!("events[{i}].name"), "empty event name".into()));
            }
            a.add_event(event).map_err(|err| at(format!("events[{i}].name"), err.to_string()))?;
        }
        for (i, s) in doc.states.into_iter().enumerate() {
            let info = StateInfo { name: s.name, initial: s.initial, marked: s.marked, secret: s.secret };
            a.add_state(info).map_err(|err| at(format!("states[{i}].name"), err.to_string()))?;
        }
        for (i, [from, event, to]) in doc.transitions.iter().enumerate() {
            let f = a
                .state_id(from)
                .ok_or_else(|| at(format!("transitions[{i}][0]"), format!("unknown state `{from}`")))?;
            let label = a
                .label_of(event)
                .ok_or_else(|| at(format!("transitions[{i}][1]"), format!("unknown event `{event}`")))?;
            let t =
                a.state_id(to).ok_or_else(|| at(format!("transitions[{i}][2]"), format!("unknown state `{to}`")))?;
            a.add_transition(f, label, t);
        }
        Ok(a)
    }
}

impl From<Automaton> for AutomatonDocument {
    fn from(a: Automaton) -> Self {
        AutomatonDocument {
            name: a.name().to_string(),
            events: a
                .events()
                .iter()
                .map(|e| EventDocument { name: e.name.clone(), observable: e.observable, controllable: e.controllable })
                .collect(),
            states: a
                .states()
                .iter()
                .map(|s| StateDocument { name: s.name.clone(), initial: s.initial, marked: s.marked, secret: s.secret })
                .collect(),
            transitions: a
                .transitions()
                .map(|(f, l, t)| [a.state(f).name.clone(), a.label_name(l).to_string(), a.state(t).name.clone()])
                .collect(),
        }
    }
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let doc: AutomatonDocument = serde_json::from_str(text)?;
    Automaton::try_from(doc)
}

pub fn serialize_automaton(a: &Automaton) -> String {
    let mut s = serde_json::to_string_pretty(&AutomatonDocument::from(a.clone())).expect("documents serialize");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_attrs(shape: &str, marked: bool, secret: bool) -> String {
    let mut attrs = format!("shape={shape}");
    if marked {
        attrs.push_str(", style=filled, fillcolor=lightgrey");
    }
    if secret {
        attrs.push_str(", peripheries=2");
    }
    attrs
}

fn render(
    name: &str,
    comments: &[String],
    nodes: &[(String, String)],
    initial: Option<usize>,
    edges: &[(usize, String, usize)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    for c in comments {
        let _ = writeln!(out, "  // {c}");
    }
    let _ = writeln!(out, "  rankdir=LR;");
    if initial.is_some() {
        let _ = writeln!(out, "  __start [shape=point];");
    }
    for (label, attrs) in nodes {
        let _ = writeln!(out, "  {} [{attrs}];", quote(label));
    }
    if let Some(i) = initial {
        let _ = writeln!(out, "  __start -> {};", quote(&nodes[i].0));
    }
    for (f, label, t) in edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&nodes[*f].0), quote(&nodes[*t].0), quote(label));
    }
    out.push_str("}\n");
    out
}

pub fn automaton_to_dot(a: &Automaton) -> String {
    let nodes: Vec<(String, String)> =
        a.states().iter().map(|s| (s.name.clone(), node_attrs("circle", s.marked, s.secret))).collect();
    let edges: Vec<_> = a.transitions().map(|(f, l, t)| (f, a.label_name(l).to_string(), t)).collect();
    render(a.name(), &[], &nodes, a.initial_state(), &edges)
}

fn kind_shape(k: Kind) -> &'static str {
    match k {
        Kind::Y => "box",
        Kind::Z => "ellipse",
        Kind::W => "diamond",
    }
}

/// Y states as boxes, Z states as ellipses, W states as diamonds.
pub fn tpo_to_dot(t: &Tpo, name: &str) -> String {
    let nodes: Vec<(String, String)> = t
        .states
        .iter()
        .zip(&t.names)
        .map(|(s, n)| (n.clone(), node_attrs(kind_shape(s.kind), s.kind == Kind::Y, false)))
        .collect();
    let edges: Vec<_> = t
        .edges
        .iter()
        .enumerate()
        .flat_map(|(s, out)| out.iter().map(move |e| (s, e.symbol.to_string(), e.target)))
        .collect();
    render(name, &[], &nodes, t.initial, &edges)
}

/// The supervisor, each tuple drawn with the shape of its furthest component:
/// a diamond once some component is a W state, a box when all are Y states,
/// an ellipse otherwise.
pub fn structure_to_dot(m: &ModularEditStructure) -> String {
    let sup = &m.supervisor;
    let nodes: Vec<(String, String)> = (0..sup.num_states())
        .map(|s| {
            let origins = m.origins(s);
            let kind = if origins.contains(&Kind::W) {
                Kind::W
            } else if origins.contains(&Kind::Z) {
                Kind::Z
            } else {
                Kind::Y
            };
            (sup.state(s).name.clone(), node_attrs(kind_shape(kind), sup.state(s).marked, false))
        })
        .collect();
    let edges: Vec<_> = sup.transitions().map(|(f, l, t)| (f, sup.label_name(l).to_string(), t)).collect();
    let comments = vec![
        format!("plant states: {}", m.plant_states),
        format!("removed states: {}", m.removed_states()),
        format!("max consecutive erasures: {}", m.k),
    ];
    render(sup.name(), &comments, &nodes, sup.initial_state(), &edges)
}

/// Which structure a JSON document on disk holds.
pub enum Document {
    Automaton(Automaton),
    Structure(Box<ModularEditStructure>),
}

/// Reads an automaton document or a saved modular edit structure.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("supervisor").is_some() {
        return Ok(Document::Structure(Box::new(serde_json::from_value(value)?)));
    }
    let doc: AutomatonDocument = serde_json::from_value(value)?;
    Ok(Document::Automaton(Automaton::try_from(doc)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::synthesis::{synthesize_modular_edit_structure, SynthesisOptions};

    #[test]
    fn fixture_document() {
        let text = serialize_automaton(&fixture::g1());
        assert!(text.contains(r#""tau""#));
        let a = parse_automaton(&text).unwrap();
        assert_eq!(a, fixture::g1());
        assert_eq!((a.num_states(), a.events().len(), a.num_transitions()), (4, 2, 4));
        assert!(a.next(a.state_id("q1").unwrap(), "α").is_some());
    }

    #[test]
    fn defaults() {
        let a = parse_automaton(r#"{"name":"m","states":[{"name":"p","initial":true}]}"#).unwrap();
        assert_eq!(a.num_states(), 1);
        assert!(a.state(0).initial && !a.state(0).marked && !a.state(0).secret);
        let a = parse_automaton(r#"{"name":"m","events":[{"name":"x"}],"states":[{"name":"p"}]}"#).unwrap();
        assert!(a.event(0).observable && a.event(0).controllable);
    }

    #[test]
    fn errors_cite_the_entry() {
        let err = parse_automaton(
            r#"{"name":"m","events":[{"name":"x"}],"states":[{"name":"p"}],"transitions":[["p","x","p"],["p","y","p"]]}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::Document { path: "transitions[1][1]".into(), message: "unknown event `y`".into() });
        let err = parse_automaton(r#"{"name":"m","events":[{"name":"tau"}],"states":[]}"#).unwrap_err();
        assert!(matches!(err, Error::Document { ref path, .. } if path == "events[0].name"));
        let err = parse_automaton(r#"{"name":"m","states":[{"name":"p"},{"name":"p"}]}"#).unwrap_err();
        assert!(matches!(err, Error::Document { ref path, .. } if path == "states[1].name"));
        assert!(matches!(parse_automaton("{"), Err(Error::Json(_))));
        assert!(matches!(parse_automaton(r#"{"name":"m","states":[],"extra":1}"#), Err(Error::Json(_))));
    }

    #[test]
    fn serde_goes_through_documents() {
        let g = fixture::g2();
        let json = serde_json::to_string(&g).unwrap();
        let back: Automaton = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_exports() {
        let empty = automaton_to_dot(&Automaton::new("e"));
        assert!(!empty.contains("->") && !empty.contains("shape"));
        let dot = automaton_to_dot(&fixture::g1());
        assert!(dot.contains("\"q3\" [shape=circle, peripheries=2]"));
        assert!(dot.contains("label=\"tau\""));

        let g = crate::automaton::sync_compose(&fixture::g1(), &fixture::g2()).unwrap();
        let det = crate::estimation::determinize(&g);
        let t = crate::tpo::build_largest_tpo(&crate::estimation::desired_observer(&det), &det);
        let dot = tpo_to_dot(&t, "T");
        assert!(dot.contains("\"({(q0,s0)},{(q0,s0)}),γ→ε\" [shape=diamond]"));
        assert!(dot.contains("[shape=box, style=filled, fillcolor=lightgrey]"));

        let m = synthesize_modular_edit_structure(&fixture::system(), 1, &SynthesisOptions::default()).unwrap();
        let dot = structure_to_dot(&m);
        assert!(dot.contains(&format!("// removed states: {}", m.removed_states())));
        assert!(dot.contains("label=\"erz:γ@γ\""));
    }

    #[test]
    fn documents_are_told_apart() {
        let m = synthesize_modular_edit_structure(&fixture::system(), 1, &SynthesisOptions::default()).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(matches!(parse_document(&json).unwrap(), Document::Structure(_)));
        assert!(matches!(parse_document(&serialize_automaton(&fixture::g1())).unwrap(), Document::Automaton(_)));
    }
}
