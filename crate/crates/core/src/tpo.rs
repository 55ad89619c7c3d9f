//! Three-player observers: the game graph between a dummy player (Y states),
//! the edit function (Z states) and the environment (W states), run
//! semantics, and pruning to the all-edit structure under a bound on
//! consecutive erasures.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, StateId, Word};
use crate::error::{Error, Result};
use crate::estimation::{determinize, Observer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Y,
    Z,
    W,
}

/// What the environment is about to deliver at a W state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Pass(String),
    Erase(String),
}

impl Action {
    pub fn event(&self) -> &str {
        match self {
            Action::Pass(e) | Action::Erase(e) => e,
        }
    }
}

/// A TPO state. `xd` indexes the desired observer (the intruder's estimate)
/// and is `None` only when that observer is empty; `xf` indexes the observer
/// (the true estimate). `erasures` is set on states of a pruned structure and
/// counts the consecutive erasures made so far.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TpoState {
    pub kind: Kind,
    pub xd: Option<StateId>,
    pub xf: StateId,
    pub event: Option<String>,
    pub action: Option<Action>,
    pub erasures: Option<usize>,
}

impl TpoState {
    fn y(xd: Option<StateId>, xf: StateId) -> Self {
        TpoState { kind: Kind::Y, xd, xf, event: None, action: None, erasures: None }
    }

    fn z(xd: Option<StateId>, xf: StateId, e: &str) -> Self {
        TpoState { kind: Kind::Z, event: Some(e.to_string()), ..TpoState::y(xd, xf) }
    }

    fn w(xd: Option<StateId>, xf: StateId, action: Action) -> Self {
        TpoState { kind: Kind::W, action: Some(action), ..TpoState::y(xd, xf) }
    }

    /// The same state without the erasure annotation.
    pub fn base(&self) -> TpoState {
        TpoState { erasures: None, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeClass {
    Yz,
    Zz,
    Zw1,
    Zw2,
    Wy1,
    Wy2,
}

/// Symbols of TPO edges and of edited output: an event, the empty insertion,
/// or the erasure of an event.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EditSymbol {
    Event(String),
    Epsilon,
    Erase(String),
}

impl fmt::Display for EditSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditSymbol::Event(e) => write!(f, "{e}"),
            EditSymbol::Epsilon => write!(f, "ε"),
            EditSymbol::Erase(e) => write!(f, "{e}→ε"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TpoEdge {
    pub class: EdgeClass,
    pub symbol: EditSymbol,
    pub target: usize,
}

/// A three-player observer over a desired observer / observer pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tpo {
    pub states: Vec<TpoState>,
    pub names: Vec<String>,
    pub edges: Vec<Vec<TpoEdge>>,
    pub initial: Option<usize>,
    /// Observable events of the observed system.
    pub alphabet: Vec<String>,
    pub xd_names: Vec<String>,
    pub xf_names: Vec<String>,
}

impl Tpo {
    fn empty(alphabet: Vec<String>, xd_names: Vec<String>, xf_names: Vec<String>) -> Self {
        Tpo { states: Vec::new(), names: Vec::new(), edges: Vec::new(), initial: None, alphabet, xd_names, xf_names }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn find(&self, state: &TpoState) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    pub fn find_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The unique edge out of `s` carrying `symbol`.
    pub fn step(&self, s: usize, symbol: &EditSymbol) -> Option<&TpoEdge> {
        self.edges[s].iter().find(|e| &e.symbol == symbol)
    }

    pub fn state_name(&self, state: &TpoState) -> String {
        let xd = state.xd.map_or("∅", |x| self.xd_names[x].as_str());
        let info = format!("({},{})", xd, self.xf_names[state.xf]);
        let mut name = match (&state.kind, &state.event, &state.action) {
            (Kind::Z, Some(e), _) => format!("{info},{e}"),
            (Kind::W, _, Some(Action::Pass(e))) => format!("{info},{e}→{e}"),
            (Kind::W, _, Some(Action::Erase(e))) => format!("{info},{e}→ε"),
            _ => info,
        };
        if let Some(c) = state.erasures {
            name.push_str(&format!("#{c}"));
        }
        name
    }

    fn intern(&mut self, state: TpoState, index: &mut HashMap<TpoState, usize>, queue: &mut VecDeque<usize>) -> usize {
        if let Some(&id) = index.get(&state) {
            return id;
        }
        let id = self.states.len();
        self.names.push(self.state_name(&state));
        index.insert(state.clone(), id);
        self.states.push(state);
        self.edges.push(Vec::new());
        queue.push_back(id);
        id
    }

    /// True when every state and edge of `self`, erasure annotations
    /// dropped, also occurs in `other`.
    pub fn is_subgraph_of(&self, other: &Tpo) -> bool {
        let map: Option<Vec<usize>> = self.states.iter().map(|s| other.find(&s.base())).collect();
        let Some(map) = map else { return false };
        self.edges.iter().enumerate().all(|(s, out)| {
            out.iter().all(|e| {
                other.edges[map[s]]
                    .iter()
                    .any(|o| o.class == e.class && o.symbol == e.symbol && o.target == map[e.target])
            })
        })
    }

    /// Z states without any decision, and W states without a successor.
    pub fn deadlocks(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&s| self.states[s].kind != Kind::Y && self.edges[s].is_empty()).collect()
    }

    /// Follows `run` from the initial state; returns the state reached.
    pub fn replay(&self, run: &[EditSymbol]) -> Result<usize> {
        let mut at = self.initial.ok_or_else(|| Error::MalformedRun("empty structure".into()))?;
        for (i, sym) in run.iter().enumerate() {
            at = self
                .step(at, sym)
                .ok_or_else(|| Error::MalformedRun(format!("no `{sym}` edge at step {i} ({})", self.names[at])))?
                .target;
        }
        Ok(at)
    }

    /// Y states reachable from Y state `y` by one complete segment on `event`
    /// (any chain of insertions followed by a stop or an erasure).
    pub fn segment_targets(&self, y: usize, event: &str) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let Some(z) = self.step(y, &EditSymbol::Event(event.to_string())).map(|e| e.target) else {
            return out;
        };
        let mut seen = BTreeSet::from([z]);
        let mut stack = vec![z];
        while let Some(s) = stack.pop() {
            for edge in &self.edges[s] {
                match edge.class {
                    EdgeClass::Zz => {
                        if seen.insert(edge.target) {
                            stack.push(edge.target);
                        }
                    }
                    EdgeClass::Zw1 | EdgeClass::Zw2 => {
                        out.extend(self.edges[edge.target].iter().map(|e| e.target));
                    }
                    _ => {}
                }
            }
        }
        out
    }
}

fn sorted_events(a: &Automaton) -> Vec<String> {
    let mut v: Vec<String> = a.events().iter().filter(|e| e.observable).map(|e| e.name.clone()).collect();
    v.sort();
    v
}

/// The largest TPO: every transition the admissibility conditions allow, at
/// every reachable state.
pub fn build_largest_tpo(obsd: &Observer, obs: &Observer) -> Tpo {
    let d = &obsd.automaton;
    let f = &obs.automaton;
    let alphabet = sorted_events(f);
    let insertable = sorted_events(d);
    let names = |a: &Automaton| a.states().iter().map(|s| s.name.clone()).collect::<Vec<_>>();
    let mut t = Tpo::empty(alphabet.clone(), names(d), names(f));
    let Some(xf0) = f.initial_state() else { return t };
    let xd0 = d.initial_state();

    let mut index = HashMap::new();
    let mut queue = VecDeque::new();
    let y0 = t.intern(TpoState::y(xd0, xf0), &mut index, &mut queue);
    t.initial = Some(y0);
    let dnext = |xd: Option<StateId>, e: &str| xd.and_then(|x| d.next(x, e));

    while let Some(id) = queue.pop_front() {
        let st = t.states[id].clone();
        let mut out: Vec<(EdgeClass, EditSymbol, TpoState)> = Vec::new();
        match st.kind {
            Kind::Y => {
                for e in &alphabet {
                    if f.next(st.xf, e).is_some() {
                        out.push((EdgeClass::Yz, EditSymbol::Event(e.clone()), TpoState::z(st.xd, st.xf, e)));
                    }
                }
            }
            Kind::Z => {
                let e = st.event.clone().unwrap();
                for theta in &insertable {
                    if let Some(xd2) = dnext(st.xd, theta) {
                        out.push((EdgeClass::Zz, EditSymbol::Event(theta.clone()), TpoState::z(Some(xd2), st.xf, &e)));
                    }
                }
                let true_move = f.next(st.xf, &e).is_some();
                if dnext(st.xd, &e).is_some() && true_move {
                    out.push((EdgeClass::Zw1, EditSymbol::Epsilon, TpoState::w(st.xd, st.xf, Action::Pass(e.clone()))));
                }
                if true_move {
                    out.push((
                        EdgeClass::Zw2,
                        EditSymbol::Erase(e.clone()),
                        TpoState::w(st.xd, st.xf, Action::Erase(e.clone())),
                    ));
                }
            }
            Kind::W => match st.action.clone().unwrap() {
                Action::Pass(e) => {
                    if let (Some(xd2), Some(xf2)) = (dnext(st.xd, &e), f.next(st.xf, &e)) {
                        out.push((EdgeClass::Wy1, EditSymbol::Event(e), TpoState::y(Some(xd2), xf2)));
                    }
                }
                Action::Erase(e) => {
                    if let Some(xf2) = f.next(st.xf, &e) {
                        out.push((EdgeClass::Wy2, EditSymbol::Event(e), TpoState::y(st.xd, xf2)));
                    }
                }
            },
        }
        for (class, symbol, target) in out {
            let target = t.intern(target, &mut index, &mut queue);
            t.edges[id].push(TpoEdge { class, symbol, target });
        }
    }
    t
}

/// One event's worth of a run: the genuine event, the insertions made, and
/// whether the event was finally erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub event: String,
    pub insertions: Vec<String>,
    pub erased: bool,
}

/// Splits a run, given as its edge symbols from the initial Y state, into
/// segments.
pub fn segments(run: &[EditSymbol]) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    let mut it = run.iter().enumerate();
    while let Some((i, first)) = it.next() {
        let EditSymbol::Event(event) = first else {
            return Err(Error::MalformedRun(format!("step {i}: expected a system event, found `{first}`")));
        };
        let mut insertions = Vec::new();
        let erased = loop {
            match it.next() {
                Some((_, EditSymbol::Event(theta))) => insertions.push(theta.clone()),
                Some((_, EditSymbol::Epsilon)) => break false,
                Some((j, EditSymbol::Erase(x))) => {
                    if x != event {
                        return Err(Error::MalformedRun(format!("step {j}: erasing `{x}` while handling `{event}`")));
                    }
                    break true;
                }
                None => return Err(Error::MalformedRun(format!("segment for `{event}` has no final decision"))),
            }
        };
        match it.next() {
            Some((_, EditSymbol::Event(e))) if e == event => {}
            other => {
                return Err(Error::MalformedRun(format!(
                    "segment for `{event}` must end by delivering it, found {:?}",
                    other.map(|(_, s)| s.to_string())
                )))
            }
        }
        out.push(Segment { event: event.clone(), insertions, erased });
    }
    Ok(out)
}

/// The edited output of a run: insertions, then the event unless erased.
pub fn run_string(run: &[EditSymbol]) -> Result<Word> {
    let mut out = Word::new();
    for seg in segments(run)? {
        out.extend(seg.insertions);
        if !seg.erased {
            out.push(seg.event);
        }
    }
    Ok(out)
}

/// The genuine system events of a run.
pub fn edit_projection(run: &[EditSymbol]) -> Result<Word> {
    Ok(segments(run)?.into_iter().map(|s| s.event).collect())
}

/// Completeness up to `depth`: no deadlocking Z or W state, and every string
/// of `g` of length at most `depth` is the edit projection of some run.
pub fn check_complete(t: &Tpo, g: &Automaton, depth: usize) -> bool {
    if !t.deadlocks().is_empty() {
        return false;
    }
    let det = determinize(g);
    let Some(x0) = det.initial() else { return true };
    let Some(y0) = t.initial else { return false };
    let d = &det.automaton;
    let mut best: HashMap<(BTreeSet<usize>, StateId), usize> = HashMap::new();
    let mut stack = vec![(BTreeSet::from([y0]), x0, depth)];
    while let Some((ys, x, left)) = stack.pop() {
        if left == 0 {
            continue;
        }
        for ev in d.events() {
            let Some(x2) = d.next(x, &ev.name) else { continue };
            let next: BTreeSet<usize> = ys.iter().flat_map(|&y| t.segment_targets(y, &ev.name)).collect();
            if next.is_empty() {
                return false;
            }
            let key = (next, x2);
            if best.get(&key).is_some_and(|&b| b >= left - 1) {
                continue;
            }
            best.insert(key.clone(), left - 1);
            stack.push((key.0, key.1, left - 1));
        }
    }
    true
}

/// Prunes `t` to the all-edit structure allowing at most `k` consecutive
/// erasures.
///
/// States are first paired with their current count of consecutive erasures;
/// copies that would reach `k + 1` are dropped. Then, until nothing changes:
/// Z states that can no longer commit to a final decision are removed, W
/// states without a successor are removed, and Y states with an event into a
/// removed Z state are removed. The result is trimmed to its reachable part
/// and is empty when the initial state goes.
pub fn prune_to_aes(t: &Tpo, k: usize) -> Tpo {
    let mut out = Tpo::empty(t.alphabet.clone(), t.xd_names.clone(), t.xf_names.clone());
    let Some(y0) = t.initial else { return out };

    // count-annotated copy
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut edges: Vec<Vec<TpoEdge>> = Vec::new();
    let mut queue = VecDeque::from([(y0, 0usize)]);
    index.insert((y0, 0), 0);
    pairs.push((y0, 0));
    edges.push(Vec::new());
    while let Some((q, c)) = queue.pop_front() {
        let id = index[&(q, c)];
        for edge in &t.edges[q] {
            let c2 = match edge.class {
                EdgeClass::Zz | EdgeClass::Zw1 => 0,
                EdgeClass::Zw2 => c + 1,
                _ => c,
            };
            if c2 > k {
                continue;
            }
            let key = (edge.target, c2);
            let target = *index.entry(key).or_insert_with(|| {
                pairs.push(key);
                edges.push(Vec::new());
                queue.push_back(key);
                pairs.len() - 1
            });
            edges[id].push(TpoEdge { class: edge.class, symbol: edge.symbol.clone(), target });
        }
    }

    let n = pairs.len();
    let kind = |s: usize| t.states[pairs[s].0].kind;
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        // Z states that reach a live W through live insertions
        let mut commits = vec![false; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut stack = Vec::new();
        for s in (0..n).filter(|&s| alive[s] && kind(s) == Kind::Z) {
            for e in &edges[s] {
                if !alive[e.target] {
                    continue;
                }
                match e.class {
                    EdgeClass::Zz => preds[e.target].push(s),
                    EdgeClass::Zw1 | EdgeClass::Zw2 if !commits[s] => {
                        commits[s] = true;
                        stack.push(s);
                    }
                    _ => {}
                }
            }
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !commits[p] {
                    commits[p] = true;
                    stack.push(p);
                }
            }
        }
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            let dead = match kind(s) {
                Kind::Z => !commits[s],
                Kind::W => !edges[s].iter().any(|e| alive[e.target]),
                Kind::Y => edges[s].iter().any(|e| !alive[e.target]),
            };
            if dead {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    if !alive[0] {
        return out;
    }
    let mut new_id = vec![usize::MAX; n];
    let mut order = vec![0usize];
    new_id[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for e in &edges[s] {
            if alive[e.target] && new_id[e.target] == usize::MAX {
                new_id[e.target] = order.len();
                order.push(e.target);
            }
        }
    }
    for &s in &order {
        let (q, c) = pairs[s];
        let state = TpoState { erasures: Some(c), ..t.states[q].clone() };
        out.names.push(out.state_name(&state));
        out.states.push(state);
        out.edges.push(
            edges[s]
                .iter()
                .filter(|e| alive[e.target])
                .map(|e| TpoEdge { target: new_id[e.target], ..e.clone() })
                .collect(),
        );
    }
    out.initial = Some(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::sync_compose;
    use crate::estimation::desired_observer;
    use crate::{abstraction::abstract_component, fixture};

    fn ev(e: &str) -> EditSymbol {
        EditSymbol::Event(e.to_string())
    }

    fn er(e: &str) -> EditSymbol {
        EditSymbol::Erase(e.to_string())
    }

    fn words(s: &[&str]) -> Word {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn monolithic() -> (Automaton, Tpo) {
        let g = sync_compose(&fixture::g1(), &fixture::g2()).unwrap();
        let obs = determinize(&g);
        let t = build_largest_tpo(&desired_observer(&obs), &obs);
        (g, t)
    }

    /// The erase γ / pass β / insert γ and erase α run.
    fn sp_run() -> Vec<EditSymbol> {
        vec![ev("γ"), er("γ"), ev("γ"), ev("β"), EditSymbol::Epsilon, ev("β"), ev("α"), ev("γ"), er("α"), ev("α")]
    }

    #[test]
    fn monolithic_initial_decisions() {
        let (_, t) = monolithic();
        let y0 = t.initial.unwrap();
        let z = t.step(y0, &ev("γ")).unwrap().target;
        assert_eq!(t.states[z].kind, Kind::Z);
        let symbols: BTreeSet<_> = t.edges[z].iter().map(|e| e.symbol.clone()).collect();
        assert!(symbols.contains(&EditSymbol::Epsilon));
        assert!(symbols.contains(&er("γ")));
        // zz insertions are admitted exactly where the desired observer moves
        assert!(symbols.contains(&ev("γ")) && symbols.contains(&ev("β")));
    }

    #[test]
    fn component_tpo_offers_erasure_or_nothing() {
        let b = abstract_component(&fixture::g1()).unwrap();
        let t = build_largest_tpo(&b.h_obd, &b.h_b);
        let y0 = t.initial.unwrap();
        assert_eq!(t.names[y0], "({q0},{q0})");
        let z = t.step(y0, &ev("γ")).unwrap().target;
        let classes: BTreeSet<_> = t.edges[z].iter().map(|e| e.class).collect();
        assert!(classes.contains(&EdgeClass::Zw1) && classes.contains(&EdgeClass::Zw2));
    }

    #[test]
    fn transitionless_observer_gives_single_state() {
        let mut a = Automaton::new("a");
        a.add_event(crate::EventId::new("x")).unwrap();
        a.add_state(crate::StateInfo::new("p").initial()).unwrap();
        let o = determinize(&a);
        let t = build_largest_tpo(&desired_observer(&o), &o);
        assert_eq!(t.num_states(), 1);
        assert_eq!(t.num_edges(), 0);
    }

    #[test]
    fn wy_edges_update_the_right_estimates() {
        let (_, t) = monolithic();
        for (s, out) in t.edges.iter().enumerate() {
            for e in out {
                let (a, b) = (&t.states[s], &t.states[e.target]);
                match e.class {
                    EdgeClass::Wy1 => assert!(a.xd != b.xd && a.xf != b.xf),
                    EdgeClass::Wy2 => assert!(a.xd == b.xd && a.xf != b.xf),
                    EdgeClass::Yz => assert!(a.xd == b.xd && a.xf == b.xf),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn run_strings() {
        let (_, t) = monolithic();
        let run = sp_run();
        t.replay(&run).unwrap();
        assert_eq!(run_string(&run).unwrap(), words(&["β", "γ"]));
        assert_eq!(edit_projection(&run).unwrap(), words(&["γ", "β", "α"]));

        let identity = vec![ev("γ"), EditSymbol::Epsilon, ev("γ"), ev("β"), EditSymbol::Epsilon, ev("β")];
        assert_eq!(run_string(&identity).unwrap(), words(&["γ", "β"]));
        assert_eq!(edit_projection(&identity).unwrap(), words(&["γ", "β"]));
        let erase_all = vec![ev("γ"), er("γ"), ev("γ"), ev("β"), er("β"), ev("β")];
        assert!(run_string(&erase_all).unwrap().is_empty());
        assert!(edit_projection(&[]).unwrap().is_empty());

        assert!(run_string(&[ev("γ"), er("β"), ev("γ")]).is_err());
        assert!(run_string(&[ev("γ"), ev("α")]).is_err());
        assert!(run_string(&[EditSymbol::Epsilon]).is_err());
    }

    fn named(t: &Tpo, xd: &str, xf: &str, rest: &str) -> String {
        let _ = t;
        format!("({xd},{xf}){rest}")
    }

    #[test]
    fn pruning_the_monolithic_structure() {
        let (g, t) = monolithic();
        let aes = prune_to_aes(&t, 1);
        assert!(aes.is_subgraph_of(&t));
        assert!(aes.deadlocks().is_empty());
        assert!(check_complete(&aes, &g, 3));
        let base_names: BTreeSet<String> = aes.states.iter().map(|s| t.state_name(&s.base())).collect();
        let a = "{(q0,s0)}";
        let d = "{(q1,s1),(q1,s2),(q2,s1),(q2,s2)}";
        let e = "{(q3,s3)}";
        let c = "{(q1,s0),(q2,s0)}";
        let b = "{(q0,s1),(q0,s2)}";
        for gone in [
            named(&t, a, d, ""),
            named(&t, a, d, ",α"),
            named(&t, a, d, ",α→ε"),
            named(&t, a, e, ""),
            named(&t, a, c, ",β→ε"),
            named(&t, a, b, ",γ→ε"),
        ] {
            assert!(t.find_by_name(&gone).is_some(), "{gone} missing from T");
            assert!(!base_names.contains(&gone), "{gone} survived pruning");
        }
        let mut sp = sp_run();
        assert!(aes.replay(&sp).is_ok());
        sp.truncate(3);
        assert!(aes.replay(&sp).is_ok());
    }

    #[test]
    fn unconstrained_complete_structure_is_a_fixpoint() {
        let g = fixture::g1_without_secrets();
        let o = determinize(&g);
        let t = build_largest_tpo(&desired_observer(&o), &o);
        let aes = prune_to_aes(&t, 5);
        assert!(aes.is_subgraph_of(&t));
        let bases: BTreeSet<TpoState> = aes.states.iter().map(TpoState::base).collect();
        assert_eq!(bases.len(), t.num_states());
    }

    #[test]
    fn erase_only_structure_with_zero_budget_is_empty() {
        // everything secret after the first event: only erasures keep the
        // intruder estimate safe, and k = 0 forbids them
        let mut a = Automaton::new("a");
        a.add_event(crate::EventId::new("x")).unwrap();
        a.add_state(crate::StateInfo::new("p").initial()).unwrap();
        a.add_state(crate::StateInfo::new("r").secret()).unwrap();
        a.add_transition_named("p", "x", "r").unwrap();
        let o = determinize(&a);
        let t = build_largest_tpo(&desired_observer(&o), &o);
        assert!(prune_to_aes(&t, 0).is_empty());
        assert!(!prune_to_aes(&t, 1).is_empty());
    }

    #[test]
    fn deadlocked_structure_is_incomplete() {
        let (g, t) = monolithic();
        let mut broken = t.clone();
        let y0 = broken.initial.unwrap();
        let z = broken.step(y0, &ev("γ")).unwrap().target;
        broken.edges[z].clear();
        assert!(!check_complete(&broken, &g, 3));
        let mut empty_lang = Automaton::new("e");
        empty_lang.add_state(crate::StateInfo::new("x")).unwrap();
        assert!(check_complete(&prune_to_aes(&t, 1), &empty_lang, 3));
    }
}
