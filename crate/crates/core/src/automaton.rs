//! Finite automata with a silent event, secret/marked/initial state flags and
//! per-event controllability, plus the structural operations the rest of the
//! crate is built on: synchronous composition, quotients, projection,
//! bounded language enumeration and deterministic isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved name of the silent event.
pub const TAU: &str = "tau";

pub type StateId = usize;
pub type EventIdx = usize;

/// A string of event names.
pub type Word = Vec<String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Event(EventIdx),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventId {
    pub name: String,
    pub observable: bool,
    pub controllable: bool,
}

impl EventId {
    pub fn new(name: impl Into<String>) -> Self {
        EventId { name: name.into(), observable: true, controllable: true }
    }

    pub fn uncontrollable(name: impl Into<String>) -> Self {
        EventId { controllable: false, ..EventId::new(name) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateInfo {
    pub name: String,
    pub initial: bool,
    pub marked: bool,
    pub secret: bool,
}

impl StateInfo {
    pub fn new(name: impl Into<String>) -> Self {
        StateInfo { name: name.into(), ..Default::default() }
    }

    pub fn initial(mut self) -> Self {
        self.initial = true;
        self
    }

    pub fn marked(mut self) -> Self {
        self.marked = true;
        self
    }

    pub fn secret(mut self) -> Self {
        self.secret = true;
        self
    }
}

/// A (possibly nondeterministic) finite automaton.
///
/// States and events are addressed by dense indices; names are unique and
/// stable so that structures produced by different operations can be
/// compared by state identity. Successor lists are kept sorted and free of
/// duplicates.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "crate::io::AutomatonDocument", into = "crate::io::AutomatonDocument")]
pub struct Automaton {
    name: String,
    events: Vec<EventId>,
    event_index: HashMap<String, EventIdx>,
    states: Vec<StateInfo>,
    state_index: HashMap<String, StateId>,
    succ: Vec<Vec<(Label, StateId)>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.events == other.events && self.states == other.states && self.succ == other.succ
    }
}

impl Eq for Automaton {}

impl Automaton {
    pub fn new(name: impl Into<String>) -> Self {
        Automaton { name: name.into(), ..Default::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_event(&mut self, event: EventId) -> Result<EventIdx> {
        if event.name == TAU {
            return Err(Error::ReservedTau);
        }
        if self.event_index.contains_key(&event.name) {
            return Err(Error::DuplicateEvent(event.name));
        }
        let idx = self.events.len();
        self.event_index.insert(event.name.clone(), idx);
        self.events.push(event);
        Ok(idx)
    }

    /// Adds `event` unless an identically flagged event of that name exists.
    pub fn ensure_event(&mut self, event: EventId) -> Result<EventIdx> {
        match self.event_index.get(&event.name) {
            Some(&idx) if self.events[idx] == event => Ok(idx),
            Some(_) => Err(Error::EventFlagConflict { name: event.name }),
            None => self.add_event(event),
        }
    }

    pub fn add_state(&mut self, state: StateInfo) -> Result<StateId> {
        if self.state_index.contains_key(&state.name) {
            return Err(Error::DuplicateState(state.name));
        }
        let id = self.states.len();
        self.state_index.insert(state.name.clone(), id);
        self.states.push(state);
        self.succ.push(Vec::new());
        Ok(id)
    }

    pub fn add_transition(&mut self, from: StateId, label: Label, to: StateId) {
        assert!(from < self.states.len() && to < self.states.len(), "state out of range");
        if let Label::Event(e) = label {
            assert!(e < self.events.len(), "event out of range");
        }
        let list = &mut self.succ[from];
        if let Err(pos) = list.binary_search(&(label, to)) {
            list.insert(pos, (label, to));
        }
    }

    /// Adds a transition by names; `"tau"` denotes the silent event.
    pub fn add_transition_named(&mut self, from: &str, event: &str, to: &str) -> Result<()> {
        let f = self.state_id(from).ok_or_else(|| Error::UnknownState(from.to_string()))?;
        let t = self.state_id(to).ok_or_else(|| Error::UnknownState(to.to_string()))?;
        let label = self.label_of(event).ok_or_else(|| Error::UnknownEvent(event.to_string()))?;
        self.add_transition(f, label, t);
        Ok(())
    }

    pub fn label_of(&self, event: &str) -> Option<Label> {
        if event == TAU {
            Some(Label::Tau)
        } else {
            self.event_id(event).map(Label::Event)
        }
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Tau => TAU,
            Label::Event(e) => &self.events[e].name,
        }
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn event(&self, idx: EventIdx) -> &EventId {
        &self.events[idx]
    }

    pub fn event_id(&self, name: &str) -> Option<EventIdx> {
        self.event_index.get(name).copied()
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.event_index.contains_key(name)
    }

    /// Names of the observable events, sorted.
    pub fn observable_alphabet(&self) -> BTreeSet<String> {
        self.events.iter().filter(|e| e.observable).map(|e| e.name.clone()).collect()
    }

    pub fn states(&self) -> &[StateInfo] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &StateInfo {
        &self.states[id]
    }

    pub fn state_mut(&mut self, id: StateId) -> &mut StateInfo {
        &mut self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, s: StateId) -> &[(Label, StateId)] {
        &self.succ[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Label, StateId)> + '_ {
        self.succ.iter().enumerate().flat_map(|(s, out)| out.iter().map(move |&(l, t)| (s, l, t)))
    }

    pub fn targets(&self, s: StateId, label: Label) -> impl Iterator<Item = StateId> + '_ {
        self.succ[s].iter().filter(move |(l, _)| *l == label).map(|&(_, t)| t)
    }

    pub fn initial_states(&self) -> Vec<StateId> {
        (0..self.states.len()).filter(|&s| self.states[s].initial).collect()
    }

    pub fn initial_state(&self) -> Option<StateId> {
        self.states.iter().position(|s| s.initial)
    }

    /// True for τ and for events declared unobservable.
    pub fn is_silent(&self, label: Label) -> bool {
        match label {
            Label::Tau => true,
            Label::Event(e) => !self.events[e].observable,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        if self.states.iter().filter(|s| s.initial).count() != 1 {
            return false;
        }
        self.succ
            .iter()
            .all(|out| out.iter().all(|(l, _)| *l != Label::Tau) && out.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Deterministic successor on `event`, if any.
    pub fn next(&self, s: StateId, event: &str) -> Option<StateId> {
        let e = self.event_id(event)?;
        self.targets(s, Label::Event(e)).next()
    }

    /// Smallest superset of `from` closed under silent transitions.
    pub fn silent_closure(&self, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut seen = from.clone();
        let mut stack: Vec<StateId> = from.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(l, t) in &self.succ[s] {
                if self.is_silent(l) && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States reachable from `from` by one `event`-step followed by silent moves.
    pub fn observable_step(&self, from: &BTreeSet<StateId>, event: EventIdx) -> BTreeSet<StateId> {
        let direct: BTreeSet<StateId> = from.iter().flat_map(|&s| self.targets(s, Label::Event(event))).collect();
        self.silent_closure(&direct)
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = self.initial_states();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Keeps the states flagged in `keep` and the transitions among them.
    /// Returns the restricted automaton and the old id of every new state.
    pub fn restrict(&self, keep: &[bool]) -> (Automaton, Vec<StateId>) {
        let mut out = Automaton {
            name: self.name.clone(),
            events: self.events.clone(),
            event_index: self.event_index.clone(),
            ..Default::default()
        };
        let mut new_id = vec![usize::MAX; self.states.len()];
        let mut old_ids = Vec::new();
        for (s, info) in self.states.iter().enumerate() {
            if keep[s] {
                new_id[s] = out.add_state(info.clone()).expect("names already unique");
                old_ids.push(s);
            }
        }
        for (s, l, t) in self.transitions() {
            if keep[s] && keep[t] {
                out.succ[new_id[s]].push((l, new_id[t]));
            }
        }
        (out, old_ids)
    }

    pub fn trim_reachable(&self) -> Automaton {
        self.restrict(&self.reachable()).0
    }

    /// Renames every state; `names` must be unique.
    pub fn with_state_names(&self, names: Vec<String>) -> Result<Automaton> {
        let mut out = self.clone();
        out.state_index.clear();
        for (s, name) in names.into_iter().enumerate() {
            if out.state_index.insert(name.clone(), s).is_some() {
                return Err(Error::DuplicateState(name));
            }
            out.states[s].name = name;
        }
        Ok(out)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "automaton {} ({} states)", self.name, self.states.len())?;
        for (s, l, t) in self.transitions() {
            writeln!(f, "  {} -{}-> {}", self.states[s].name, self.label_name(l), self.states[t].name)?;
        }
        Ok(())
    }
}

/// An equivalence relation over the states `0..n`.
///
/// Blocks are numbered by their smallest member, so equal relations always
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<StateId>>,
}

impl Partition {
    /// Builds a partition from any block labelling of the states.
    pub fn from_labels<K: Ord + Clone>(labels: &[K]) -> Partition {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        for (s, k) in labels.iter().enumerate() {
            let next = ids.len();
            let b = *ids.entry(k.clone()).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(s);
            block_of.push(b);
        }
        Partition { block_of, blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<StateId>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (b, members) in blocks.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &s in members {
                if s >= n {
                    return Err(Error::InvalidPartition(format!("state {s} out of range")));
                }
                if labels[s] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("state {s} in two blocks")));
                }
                labels[s] = b;
            }
        }
        if let Some(s) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("state {s} not covered")));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn identity(n: usize) -> Partition {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn universal(n: usize) -> Partition {
        Partition::from_labels(&vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    /// Blocks as sets of state names, for comparisons against literals.
    pub fn named_blocks(&self, a: &Automaton) -> BTreeSet<BTreeSet<String>> {
        self.blocks.iter().map(|b| b.iter().map(|&s| a.state(s).name.clone()).collect()).collect()
    }
}

/// Name of a block of states: the member itself for singletons, otherwise
/// the bracketed member list.
pub fn block_name<'a>(members: impl IntoIterator<Item = &'a str>) -> String {
    let names: Vec<&str> = members.into_iter().collect();
    if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("[{}]", names.join(","))
    }
}

/// Result of an n-ary synchronous product: the product automaton and, for
/// each product state, the tuple of component states it stands for.
#[derive(Clone, Debug)]
pub struct Product {
    pub automaton: Automaton,
    pub tuples: Vec<Vec<StateId>>,
}

/// Synchronous product of `parts`, restricted to the reachable state tuples.
///
/// Shared events move every owning component jointly; private events and τ
/// move one component. A composite state is initial or marked when all of its
/// components are, and secret when any of them is. Composite names use
/// `(x,y,…)`.
pub fn sync_product(parts: &[&Automaton], name: &str) -> Result<Product> {
    sync_product_with(parts, name, |_| Vec::new())
}

/// [`sync_product`] with additional moves supplied by `extra`; the targets of
/// extra moves are explored like any other tuple.
pub fn sync_product_with(
    parts: &[&Automaton],
    name: &str,
    extra: impl Fn(&[StateId]) -> Vec<(EventId, Vec<StateId>)>,
) -> Result<Product> {
    let mut out = Automaton::new(name);
    let mut owners: BTreeMap<String, Vec<(usize, EventIdx)>> = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for (e, ev) in part.events().iter().enumerate() {
            out.ensure_event(ev.clone())?;
            owners.entry(ev.name.clone()).or_default().push((i, e));
        }
    }

    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut queue = VecDeque::new();

    let intern = |tuple: Vec<StateId>,
                  out: &mut Automaton,
                  index: &mut HashMap<Vec<StateId>, StateId>,
                  tuples: &mut Vec<Vec<StateId>>,
                  queue: &mut VecDeque<StateId>|
     -> StateId {
        if let Some(&id) = index.get(&tuple) {
            return id;
        }
        let infos: Vec<&StateInfo> = tuple.iter().zip(parts).map(|(&s, p)| p.state(s)).collect();
        let info = StateInfo {
            name: format!("({})", infos.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(",")),
            initial: infos.iter().all(|i| i.initial),
            marked: infos.iter().all(|i| i.marked),
            secret: infos.iter().any(|i| i.secret),
        };
        let id = out.add_state(info).expect("tuples are unique");
        index.insert(tuple.clone(), id);
        tuples.push(tuple);
        queue.push_back(id);
        id
    };

    let mut initials: Vec<Vec<StateId>> = vec![Vec::new()];
    for part in parts {
        let inits = part.initial_states();
        initials = initials
            .into_iter()
            .flat_map(|prefix| {
                inits.iter().map(move |&s| {
                    let mut t = prefix.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    if parts.is_empty() {
        initials.clear();
    }
    for tuple in initials {
        intern(tuple, &mut out, &mut index, &mut tuples, &mut queue);
    }

    let event_labels: Vec<(Label, &Vec<(usize, EventIdx)>)> =
        owners.iter().map(|(name, own)| (Label::Event(out.event_id(name).unwrap()), own)).collect();
    // position in `event_labels` of each component event
    let mut global_of: Vec<Vec<usize>> = parts.iter().map(|p| vec![0; p.events().len()]).collect();
    for (g, (_, own)) in event_labels.iter().enumerate() {
        for &(i, e) in own.iter() {
            global_of[i][e] = g;
        }
    }

    while let Some(id) = queue.pop_front() {
        let tuple = tuples[id].clone();
        let mut edges: Vec<(Label, Vec<StateId>)> = Vec::new();
        let mut enabled: BTreeMap<usize, Vec<(usize, StateId)>> = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            for &(l, t) in part.successors(tuple[i]) {
                match l {
                    Label::Tau => {
                        let mut next = tuple.clone();
                        next[i] = t;
                        edges.push((Label::Tau, next));
                    }
                    Label::Event(e) => enabled.entry(global_of[i][e]).or_default().push((i, t)),
                }
            }
        }
        for (g, moves) in enabled {
            let (label, own) = event_labels[g];
            let mut combos: Vec<Vec<StateId>> = vec![tuple.clone()];
            for &(i, _) in own.iter() {
                let targets: Vec<StateId> = moves.iter().filter(|m| m.0 == i).map(|m| m.1).collect();
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        targets.iter().map(move |&t| {
                            let mut n = c.clone();
                            n[i] = t;
                            n
                        })
                    })
                    .collect();
                if combos.is_empty() {
                    break;
                }
            }
            for c in combos {
                edges.push((label, c));
            }
        }
        for (event, next) in extra(&tuple) {
            let e = out.ensure_event(event)?;
            edges.push((Label::Event(e), next));
        }
        for (label, next) in edges {
            let t = intern(next, &mut out, &mut index, &mut tuples, &mut queue);
            out.add_transition(id, label, t);
        }
    }
    Ok(Product { automaton: out, tuples })
}

/// Binary synchronous composition `a ∥ b`.
pub fn sync_compose(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    let name = format!("{}||{}", a.name(), b.name());
    Ok(sync_product(&[a, b], &name)?.automaton)
}

/// Quotient of `a` modulo the partition `p`.
pub fn quotient(a: &Automaton, p: &Partition) -> Result<Automaton> {
    if p.len() != a.num_states() {
        return Err(Error::InvalidPartition(format!(
            "partition has {} states, automaton has {}",
            p.len(),
            a.num_states()
        )));
    }
    let mut out = Automaton::new(a.name());
    for ev in a.events() {
        out.add_event(ev.clone())?;
    }
    for block in p.blocks() {
        let members: Vec<&StateInfo> = block.iter().map(|&s| a.state(s)).collect();
        out.add_state(StateInfo {
            name: block_name(members.iter().map(|m| m.name.as_str())),
            initial: members.iter().any(|m| m.initial),
            marked: members.iter().any(|m| m.marked),
            secret: members.iter().any(|m| m.secret),
        })?;
    }
    for (s, l, t) in a.transitions() {
        out.add_transition(p.block_of(s), l, p.block_of(t));
    }
    Ok(out)
}

/// Subautomaton test by state identity: every state, transition, initial
/// state and marked state of `a` also occurs in `b`.
pub fn is_subautomaton(a: &Automaton, b: &Automaton) -> bool {
    let mut map = Vec::with_capacity(a.num_states());
    for info in a.states() {
        let Some(id) = b.state_id(&info.name) else { return false };
        let other = b.state(id);
        if (info.initial && !other.initial) || (info.marked && !other.marked) {
            return false;
        }
        map.push(id);
    }
    a.transitions().all(|(s, l, t)| {
        b.label_of(a.label_name(l)).is_some_and(|bl| b.successors(map[s]).binary_search(&(bl, map[t])).is_ok())
    })
}

/// Natural projection of `word` onto the events in `keep`.
pub fn project(word: &[String], keep: &BTreeSet<String>) -> Word {
    word.iter().filter(|e| keep.contains(*e)).cloned().collect()
}

/// All observable strings of length at most `n` generated by `a`.
pub fn language_upto(a: &Automaton, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let init: BTreeSet<StateId> = a.initial_states().into_iter().collect();
    if init.is_empty() {
        return out;
    }
    let observable: Vec<EventIdx> = (0..a.events().len()).filter(|&e| a.event(e).observable).collect();
    let mut frontier = vec![(Word::new(), a.silent_closure(&init))];
    out.insert(Word::new());
    for _ in 0..n {
        let mut next = Vec::new();
        for (word, set) in &frontier {
            for &e in &observable {
                let reached = a.observable_step(set, e);
                if !reached.is_empty() {
                    let mut w = word.clone();
                    w.push(a.event(e).name.clone());
                    out.insert(w.clone());
                    next.push((w, reached));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Canonical breadth-first signature of the reachable part of a
/// deterministic automaton: per canonical state its flags and its
/// transitions as (event name, canonical target).
type CanonicalTable = Vec<(bool, bool, Vec<(String, usize)>)>;

fn canonical_table(a: &Automaton) -> CanonicalTable {
    let Some(init) = a.initial_state() else { return Vec::new() };
    let mut order = vec![usize::MAX; a.num_states()];
    let mut queue = VecDeque::from([init]);
    let mut visited = vec![init];
    order[init] = 0;
    let mut table = Vec::new();
    while let Some(s) = queue.pop_front() {
        let mut out: Vec<(String, StateId)> =
            a.successors(s).iter().map(|&(l, t)| (a.label_name(l).to_string(), t)).collect();
        out.sort();
        let mut row = Vec::new();
        for (name, t) in out {
            if order[t] == usize::MAX {
                order[t] = visited.len();
                visited.push(t);
                queue.push_back(t);
            }
            row.push((name, order[t]));
        }
        let info = a.state(s);
        table.push((info.marked, info.secret, row));
    }
    table
}

/// Isomorphism of the reachable parts of two deterministic automata,
/// including marking and secrecy.
pub fn deterministic_isomorphic(a: &Automaton, b: &Automaton) -> Result<bool> {
    for x in [a, b] {
        if !x.is_empty() && !x.is_deterministic() {
            return Err(Error::Nondeterministic(x.name().to_string()));
        }
    }
    Ok(canonical_table(a) == canonical_table(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn w(s: &[&str]) -> Word {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn chain(name: &str, events: &[&str]) -> Automaton {
        let mut a = Automaton::new(name);
        for e in events {
            a.ensure_event(EventId::new(*e)).unwrap();
        }
        a.add_state(StateInfo::new("c0").initial()).unwrap();
        for (i, e) in events.iter().enumerate() {
            a.add_state(StateInfo::new(format!("c{}", i + 1))).unwrap();
            a.add_transition_named(&format!("c{i}"), e, &format!("c{}", i + 1)).unwrap();
        }
        a
    }

    #[test]
    fn tau_cannot_be_declared() {
        let mut a = Automaton::new("a");
        assert_eq!(a.add_event(EventId::new("tau")), Err(Error::ReservedTau));
    }

    #[test]
    fn rf_composition_reaches_secret_corner() {
        let g = sync_compose(&fixture::g1(), &fixture::g2()).unwrap();
        let init = g.initial_state().unwrap();
        assert_eq!(g.state(init).name, "(q0,s0)");
        let target = g.state_id("(q3,s3)").unwrap();
        assert!(g.state(target).secret);
        // γ β α with τ moves interleaved
        let set = g.silent_closure(&BTreeSet::from([init]));
        let set = g.observable_step(&set, g.event_id("γ").unwrap());
        let set = g.observable_step(&set, g.event_id("β").unwrap());
        let set = g.observable_step(&set, g.event_id("α").unwrap());
        assert_eq!(set, BTreeSet::from([target]));
    }

    #[test]
    fn blocked_shared_event() {
        let mut a = Automaton::new("a");
        a.add_event(EventId::new("α")).unwrap();
        a.add_state(StateInfo::new("x").initial()).unwrap();
        a.add_transition_named("x", "α", "x").unwrap();
        let mut b = Automaton::new("b");
        b.add_event(EventId::new("α")).unwrap();
        b.add_state(StateInfo::new("y").initial()).unwrap();
        let ab = sync_compose(&a, &b).unwrap();
        assert_eq!(language_upto(&ab, 4), BTreeSet::from([Word::new()]));
    }

    #[test]
    fn disjoint_copy_product_is_square() {
        let a = chain("a", &["x", "y"]);
        let b = chain("b", &["u", "v"]);
        assert_eq!(sync_compose(&a, &b).unwrap().num_states(), 9);
    }

    #[test]
    fn flag_conflicts_are_rejected() {
        let a = chain("a", &["x"]);
        let mut b = Automaton::new("b");
        b.add_event(EventId::uncontrollable("x")).unwrap();
        b.add_state(StateInfo::new("y").initial()).unwrap();
        assert!(matches!(sync_compose(&a, &b), Err(Error::EventFlagConflict { .. })));
    }

    #[test]
    fn quotient_examples() {
        let g1 = fixture::g1();
        let ids = |n: &[&str]| n.iter().map(|x| g1.state_id(x).unwrap()).collect::<Vec<_>>();
        let p = Partition::from_blocks(4, &[ids(&["q0"]), ids(&["q1", "q2"]), ids(&["q3"])]).unwrap();
        let q = quotient(&g1, &p).unwrap();
        assert_eq!(q.num_states(), 3);
        let q12 = q.state_id("[q1,q2]").unwrap();
        assert!(q.targets(q12, Label::Tau).any(|t| t == q12));
        assert_eq!(q.next(q.state_id("q0").unwrap(), "γ"), Some(q12));
        assert!(q.state(q.state_id("q3").unwrap()).secret);

        let id = quotient(&g1, &Partition::identity(4)).unwrap();
        assert!(is_subautomaton(&id, &g1) && is_subautomaton(&g1, &id));

        let c = chain("c", &["x"]);
        let collapsed = quotient(&c, &Partition::universal(2)).unwrap();
        assert_eq!(collapsed.num_states(), 1);
        assert_eq!(collapsed.successors(0), &[(Label::Event(0), 0)]);

        assert!(quotient(&c, &Partition::universal(3)).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn subautomaton_detects_extra_transition() {
        let a = chain("a", &["x", "x"]);
        let mut b = a.clone();
        assert!(is_subautomaton(&a, &a));
        b.add_transition_named("c2", "x", "c0").unwrap();
        assert!(is_subautomaton(&a, &b));
        assert!(!is_subautomaton(&b, &a));
    }

    #[test]
    fn projection() {
        let keep: BTreeSet<String> = ["γ", "α"].iter().map(|s| s.to_string()).collect();
        assert_eq!(project(&w(&["γ", "tau", "α"]), &keep), w(&["γ", "α"]));
        assert_eq!(project(&[], &keep), Word::new());
    }

    #[test]
    fn language_of_g1() {
        let lang = language_upto(&fixture::g1(), 3);
        assert_eq!(lang, BTreeSet::from([w(&[]), w(&["γ"]), w(&["γ", "α"])]));
        assert_eq!(language_upto(&fixture::g1(), 0), BTreeSet::from([w(&[])]));
        let mut no_init = Automaton::new("n");
        no_init.add_state(StateInfo::new("x")).unwrap();
        assert!(language_upto(&no_init, 3).is_empty());
    }

    #[test]
    fn isomorphism_basics() {
        let a = chain("a", &["x", "y"]);
        assert!(deterministic_isomorphic(&a, &a).unwrap());
        let b = chain("b", &["y", "x"]);
        assert!(!deterministic_isomorphic(&a, &b).unwrap());
        assert!(deterministic_isomorphic(&fixture::g1(), &a).is_err());
    }
}
