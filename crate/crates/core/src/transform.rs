//! Turning three-player observers into ordinary automata over decorated
//! events, so that supervisory control can synthesize over them.
//!
//! Decorated events serialize as `e` (system event), `ins:θ@c`, `stop@c`,
//! `erz:e@e`, `out:e@e` and `drop:e@e`. Only insertions, stops and erasures
//! are controllable.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abstraction::AbstractionBundle;
use crate::automaton::{sync_product, sync_product_with, Automaton, EventId, Label, Product, StateId, StateInfo};
use crate::error::{Error, Result};
use crate::tpo::{EdgeClass, EditSymbol, Kind, Tpo, TpoState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecorationKind {
    System,
    Insert,
    Stop,
    Erase,
    Deliver,
    DeliverErased,
}

/// An event of a transformed automaton. For `Stop`, `base` repeats the
/// context event.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedEvent {
    pub kind: DecorationKind,
    pub base: String,
    pub context: Option<String>,
}

impl DecoratedEvent {
    pub fn system(e: &str) -> Self {
        DecoratedEvent { kind: DecorationKind::System, base: e.to_string(), context: None }
    }

    pub fn new(kind: DecorationKind, base: &str, context: &str) -> Self {
        if kind == DecorationKind::System {
            return DecoratedEvent::system(base);
        }
        DecoratedEvent { kind, base: base.to_string(), context: Some(context.to_string()) }
    }

    pub fn insert(theta: &str, context: &str) -> Self {
        DecoratedEvent::new(DecorationKind::Insert, theta, context)
    }

    pub fn stop(context: &str) -> Self {
        DecoratedEvent::new(DecorationKind::Stop, context, context)
    }

    pub fn erase(e: &str) -> Self {
        DecoratedEvent::new(DecorationKind::Erase, e, e)
    }

    pub fn is_controllable(&self) -> bool {
        matches!(self.kind, DecorationKind::Insert | DecorationKind::Stop | DecorationKind::Erase)
    }

    pub fn event_id(&self) -> EventId {
        let id = EventId::new(self.to_string());
        if self.is_controllable() {
            id
        } else {
            EventId::uncontrollable(id.name)
        }
    }

    /// The TPO symbol this event stands for.
    pub fn rename(&self) -> EditSymbol {
        match self.kind {
            DecorationKind::Insert
            | DecorationKind::System
            | DecorationKind::Deliver
            | DecorationKind::DeliverErased => EditSymbol::Event(self.base.clone()),
            DecorationKind::Stop => EditSymbol::Epsilon,
            DecorationKind::Erase => EditSymbol::Erase(self.base.clone()),
        }
    }

    /// The TPO transition class this event encodes.
    pub fn class(&self) -> EdgeClass {
        match self.kind {
            DecorationKind::System => EdgeClass::Yz,
            DecorationKind::Insert => EdgeClass::Zz,
            DecorationKind::Stop => EdgeClass::Zw1,
            DecorationKind::Erase => EdgeClass::Zw2,
            DecorationKind::Deliver => EdgeClass::Wy1,
            DecorationKind::DeliverErased => EdgeClass::Wy2,
        }
    }

    /// Encodes a TPO edge leaving a state of kind Z or W whose pending event
    /// is `context`.
    pub fn encode(class: EdgeClass, symbol: &EditSymbol, context: &str) -> Self {
        let base = match symbol {
            EditSymbol::Event(e) | EditSymbol::Erase(e) => e.as_str(),
            EditSymbol::Epsilon => context,
        };
        let kind = match class {
            EdgeClass::Yz => DecorationKind::System,
            EdgeClass::Zz => DecorationKind::Insert,
            EdgeClass::Zw1 => DecorationKind::Stop,
            EdgeClass::Zw2 => DecorationKind::Erase,
            EdgeClass::Wy1 => DecorationKind::Deliver,
            EdgeClass::Wy2 => DecorationKind::DeliverErased,
        };
        DecoratedEvent::new(kind, base, context)
    }
}

impl fmt::Display for DecoratedEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.context.as_deref().unwrap_or("");
        match self.kind {
            DecorationKind::System => write!(f, "{}", self.base),
            DecorationKind::Insert => write!(f, "ins:{}@{c}", self.base),
            DecorationKind::Stop => write!(f, "stop@{c}"),
            DecorationKind::Erase => write!(f, "erz:{}@{c}", self.base),
            DecorationKind::Deliver => write!(f, "out:{}@{c}", self.base),
            DecorationKind::DeliverErased => write!(f, "drop:{}@{c}", self.base),
        }
    }
}

impl FromStr for DecoratedEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDecoratedEvent(s.to_string());
        let split = |rest: &str| -> Result<(String, String)> {
            let (b, c) = rest.split_once('@').ok_or_else(bad)?;
            if b.is_empty() || c.is_empty() {
                return Err(bad());
            }
            Ok((b.to_string(), c.to_string()))
        };
        let (kind, rest) = if let Some(r) = s.strip_prefix("ins:") {
            (DecorationKind::Insert, r)
        } else if let Some(r) = s.strip_prefix("erz:") {
            (DecorationKind::Erase, r)
        } else if let Some(r) = s.strip_prefix("out:") {
            (DecorationKind::Deliver, r)
        } else if let Some(r) = s.strip_prefix("drop:") {
            (DecorationKind::DeliverErased, r)
        } else if let Some(c) = s.strip_prefix("stop@") {
            if c.is_empty() {
                return Err(bad());
            }
            return Ok(DecoratedEvent::stop(c));
        } else {
            if s.is_empty() || s.contains('@') {
                return Err(bad());
            }
            return Ok(DecoratedEvent::system(s));
        };
        let (b, c) = split(rest)?;
        Ok(DecoratedEvent::new(kind, &b, &c))
    }
}

/// An automaton over decorated events together with the TPO it came from.
/// State `i` of `automaton` is state `i` of `tpo`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformedAutomaton {
    pub automaton: Automaton,
    pub tpo: Tpo,
}

impl TransformedAutomaton {
    pub fn origin(&self, s: StateId) -> Kind {
        self.tpo.states[s].kind
    }

    /// The decorated event behind the automaton event `idx`.
    pub fn decoration(&self, idx: usize) -> DecoratedEvent {
        self.automaton.event(idx).name.parse().expect("transformed alphabets hold decorated events")
    }

    /// Observable events of the underlying system.
    pub fn system_alphabet(&self) -> BTreeSet<String> {
        self.tpo.alphabet.iter().cloned().collect()
    }
}

/// Context event of a Z or W state.
fn context_of(state: &TpoState) -> Option<&str> {
    state.event.as_deref().or(state.action.as_ref().map(|a| a.event()))
}

/// The monolithic transformed automaton: one state per TPO state, Y states
/// marked, edges relabeled with their decorated events.
pub fn transform_monolithic(t: &Tpo) -> TransformedAutomaton {
    let mut a = Automaton::new("T");
    for (s, st) in t.states.iter().enumerate() {
        let info = StateInfo {
            name: t.names[s].clone(),
            initial: t.initial == Some(s),
            marked: st.kind == Kind::Y,
            secret: false,
        };
        a.add_state(info).expect("TPO state names are unique");
    }
    for (s, out) in t.edges.iter().enumerate() {
        let context = context_of(&t.states[s]).unwrap_or("");
        for edge in out {
            let ev = DecoratedEvent::encode(edge.class, &edge.symbol, context);
            let idx = a.ensure_event(ev.event_id()).expect("decorated flags are consistent");
            a.add_transition(s, Label::Event(idx), edge.target);
        }
    }
    // decorations the TPO never uses must still be declared, or a product
    // would treat them as foreign and let other components fire them freely
    for c in &t.alphabet {
        let mut own = vec![DecoratedEvent::system(c)];
        own.extend(t.alphabet.iter().map(|theta| DecoratedEvent::insert(theta, c)));
        own.extend(
            [DecorationKind::Stop, DecorationKind::Erase, DecorationKind::Deliver, DecorationKind::DeliverErased]
                .map(|kind| DecoratedEvent::new(kind, c, c)),
        );
        for ev in own {
            a.ensure_event(ev.event_id()).expect("decorated flags are consistent");
        }
    }
    TransformedAutomaton { automaton: a, tpo: t.clone() }
}

/// The interacting family of transformed automata for a modular system.
///
/// Each automaton self-loops at its Y states on the system events only other
/// components know, and its alphabet is enlarged by the shared events
/// decorated with a foreign-local context (insertion, delivery and erased
/// delivery); those events have no transitions and are therefore disabled in
/// any product.
pub fn transform_modular(ts: &[Tpo], alphabets: &[BTreeSet<String>]) -> Result<Vec<TransformedAutomaton>> {
    if ts.len() != alphabets.len() {
        return Err(Error::AlphabetMismatch { components: ts.len(), alphabets: alphabets.len() });
    }
    let mut out = Vec::with_capacity(ts.len());
    for (i, t) in ts.iter().enumerate() {
        let mut m = transform_monolithic(t);
        m.automaton.set_name(format!("T{}", i + 1));
        let own = &alphabets[i];
        for e in own {
            m.automaton.ensure_event(DecoratedEvent::system(e).event_id())?;
        }
        for (j, other) in alphabets.iter().enumerate() {
            if j == i {
                continue;
            }
            let shared: Vec<&String> = own.intersection(other).collect();
            for alpha in other.difference(own) {
                let idx = m.automaton.ensure_event(DecoratedEvent::system(alpha).event_id())?;
                for s in 0..t.num_states() {
                    if t.states[s].kind == Kind::Y {
                        m.automaton.add_transition(s, Label::Event(idx), s);
                    }
                }
                for sigma in &shared {
                    for kind in [DecorationKind::Insert, DecorationKind::Deliver, DecorationKind::DeliverErased] {
                        m.automaton.ensure_event(DecoratedEvent::new(kind, sigma, alpha).event_id())?;
                    }
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Product of transformed components with tuple-state metadata.
pub fn compose_components(components: &[TransformedAutomaton]) -> Result<Product> {
    if components.is_empty() {
        return Err(Error::NoComponents);
    }
    let parts: Vec<&Automaton> = components.iter().map(|c| &c.automaton).collect();
    sync_product(&parts, "product")
}

/// Product of transformed components with the insertions the modular
/// construction loses added back.
///
/// At a tuple whose components are all Y or Z states and where some Z
/// component handles event `c`, an insertion of σ is added when every
/// component owning σ sits in a Y state whose intruder estimate moves on σ in
/// that component's desired observer, and the resulting Y state exists. The
/// owners update their intruder estimates, everything else stays put, and the
/// new edge is labeled `ins:σ@c`.
pub fn augment_missing_insertions(
    components: &[TransformedAutomaton],
    bundles: &[AbstractionBundle],
) -> Result<Product> {
    if components.is_empty() {
        return Err(Error::NoComponents);
    }
    if components.len() != bundles.len() {
        return Err(Error::AlphabetMismatch { components: components.len(), alphabets: bundles.len() });
    }
    let parts: Vec<&Automaton> = components.iter().map(|c| &c.automaton).collect();
    let sigma: BTreeSet<String> = components.iter().flat_map(|c| c.system_alphabet()).collect();
    let extra = |tuple: &[StateId]| -> Vec<(EventId, Vec<StateId>)> {
        let states: Vec<&TpoState> = tuple.iter().zip(components).map(|(&s, c)| &c.tpo.states[s]).collect();
        if states.iter().any(|s| s.kind == Kind::W) {
            return Vec::new();
        }
        let Some(context) = states.iter().find_map(|s| s.event.clone()) else { return Vec::new() };
        let mut moves = Vec::new();
        'events: for ev in &sigma {
            let owners: Vec<usize> =
                (0..components.len()).filter(|&i| components[i].tpo.alphabet.contains(ev)).collect();
            let mut next = tuple.to_vec();
            for &i in &owners {
                let st = states[i];
                if st.kind != Kind::Y {
                    continue 'events;
                }
                let Some(xd2) = st.xd.and_then(|x| bundles[i].h_obd.automaton.next(x, ev)) else { continue 'events };
                let target = TpoState { xd: Some(xd2), ..st.clone() };
                let Some(t) = components[i].tpo.find(&target) else { continue 'events };
                next[i] = t;
            }
            if !owners.is_empty() {
                moves.push((DecoratedEvent::insert(ev, &context).event_id(), next));
            }
        }
        moves
    };
    sync_product_with(&parts, "product", extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::abstract_component;
    use crate::fixture;
    use crate::tpo::build_largest_tpo;

    fn component_tpos() -> (Vec<Tpo>, Vec<BTreeSet<String>>, Vec<AbstractionBundle>) {
        let bundles: Vec<_> = fixture::system().iter().map(|g| abstract_component(g).unwrap()).collect();
        let tpos: Vec<_> = bundles.iter().map(|b| build_largest_tpo(&b.h_obd, &b.h_b)).collect();
        let alphabets = fixture::system().iter().map(|g| g.observable_alphabet()).collect();
        (tpos, alphabets, bundles)
    }

    #[test]
    fn serialization_round_trips() {
        for s in ["γ", "ins:γ@α", "stop@β", "erz:α@α", "out:β@β", "drop:γ@γ"] {
            let d: DecoratedEvent = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("stop@β".parse::<DecoratedEvent>().unwrap().kind, DecorationKind::Stop);
        for bad in ["", "ins:γ", "ins:@α", "stop@", "a@b", "erz:α@"] {
            assert!(bad.parse::<DecoratedEvent>().is_err(), "{bad}");
        }
    }

    #[test]
    fn renaming() {
        let r = |s: &str| s.parse::<DecoratedEvent>().unwrap().rename();
        assert_eq!(r("ins:γ@α"), EditSymbol::Event("γ".into()));
        assert_eq!(r("γ"), EditSymbol::Event("γ".into()));
        assert_eq!(r("erz:α@α"), EditSymbol::Erase("α".into()));
        assert_eq!(r("stop@β"), EditSymbol::Epsilon);
        assert_eq!(r("out:β@β"), EditSymbol::Event("β".into()));
        assert_eq!(r("drop:β@β"), EditSymbol::Event("β".into()));
    }

    #[test]
    fn monolithic_transform_of_component() {
        let (tpos, _, _) = component_tpos();
        let m = transform_monolithic(&tpos[0]);
        let a = &m.automaton;
        let y0 = a.initial_state().unwrap();
        assert!(a.state(y0).marked);
        assert!(!a.event(a.event_id("γ").unwrap()).controllable);
        let z = a.next(y0, "γ").unwrap();
        assert!(!a.state(z).marked);
        for d in ["stop@γ", "erz:γ@γ"] {
            assert!(a.next(z, d).is_some(), "{d}");
            assert!(a.event(a.event_id(d).unwrap()).controllable);
        }
        assert!(a.is_deterministic());
        // encoding then renaming gives back every TPO label and class
        for (s, out) in m.tpo.edges.iter().enumerate() {
            for e in out {
                let d = a
                    .successors(s)
                    .iter()
                    .filter(|(_, t)| *t == e.target)
                    .filter_map(|&(l, _)| match l {
                        Label::Event(i) => Some(m.decoration(i)),
                        Label::Tau => None,
                    })
                    .find(|d| d.rename() == e.symbol)
                    .unwrap();
                assert_eq!((d.class(), d.rename()), (e.class, e.symbol.clone()));
                assert_eq!(d.is_controllable(), matches!(e.class, EdgeClass::Zz | EdgeClass::Zw1 | EdgeClass::Zw2));
            }
        }
    }

    #[test]
    fn single_state_tpo_transforms_to_single_marked_state() {
        let mut a = Automaton::new("a");
        a.add_event(EventId::new("x")).unwrap();
        a.add_state(StateInfo::new("p").initial()).unwrap();
        let o = crate::estimation::determinize(&a);
        let t = build_largest_tpo(&crate::estimation::desired_observer(&o), &o);
        let m = transform_monolithic(&t);
        assert_eq!(m.automaton.num_states(), 1);
        assert!(m.automaton.state(0).marked);
        assert_eq!(m.automaton.num_transitions(), 0);
    }

    #[test]
    fn modular_transform_adds_foreign_self_loops_and_blocked_events() {
        let (tpos, alphabets, _) = component_tpos();
        let ms = transform_modular(&tpos, &alphabets).unwrap();
        for (m, foreign) in ms.iter().zip(["β", "γ"]) {
            let a = &m.automaton;
            for s in 0..a.num_states() {
                assert_eq!(a.next(s, foreign) == Some(s), a.state(s).marked);
            }
        }
        let a1 = &ms[0].automaton;
        for e in ["ins:α@β", "out:α@β", "drop:α@β"] {
            let idx = a1.event_id(e).unwrap();
            assert!(a1.transitions().all(|(_, l, _)| l != Label::Event(idx)));
        }
        let single = transform_modular(&tpos[..1], &alphabets[..1]).unwrap();
        let mut mono = transform_monolithic(&tpos[0]).automaton;
        mono.set_name("T1");
        assert_eq!(single[0].automaton, mono);
        assert!(transform_modular(&tpos, &alphabets[..1]).is_err());
    }

    #[test]
    fn augmentation_adds_lost_insertion() {
        let (tpos, alphabets, bundles) = component_tpos();
        let ms = transform_modular(&tpos, &alphabets).unwrap();
        let plain = compose_components(&ms).unwrap();
        let aug = augment_missing_insertions(&ms, &bundles).unwrap();
        let ins = |p: &Product| {
            p.automaton
                .event_id("ins:β@γ")
                .map_or(0, |i| p.automaton.transitions().filter(|(_, l, _)| *l == Label::Event(i)).count())
        };
        assert_eq!(ins(&plain), 0);
        assert!(ins(&aug) > 0);
        // after β is erased, the Z tuple for γ gains the insertion of β
        let p = &aug.automaton;
        let mut z = p.initial_state().unwrap();
        for e in ["β", "erz:β@β", "drop:β@β", "γ"] {
            z = p.next(z, e).unwrap();
        }
        let t = p.next(z, "ins:β@γ").unwrap();
        assert_eq!(p.state(t).name, "(({q0},{q0}),γ,({[s1,s2]},{[s1,s2]}))");
        assert!(compose_components(&ms).unwrap().automaton.next(z, "ins:β@γ").is_none());

        let single = augment_missing_insertions(&ms[..1], &bundles[..1]).unwrap();
        assert_eq!(
            single.automaton.num_transitions(),
            compose_components(&ms[..1]).unwrap().automaton.num_transitions()
        );
    }
}
