//! Current-state estimation: observers by subset construction, desired
//! observers, and current-state opacity verification.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automaton::{quotient, Automaton, Label, Partition, StateId, StateInfo, Word};
use crate::error::Result;

/// A set of underlying states the observer may be in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub members: Vec<StateId>,
    pub secret_only: bool,
}

/// A deterministic, τ-free automaton whose states carry estimates of an
/// underlying automaton.
///
/// The automaton's `secret` flag on a state mirrors the estimate's
/// `secret_only` flag; `marked` is set when some member is marked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Observer {
    pub automaton: Automaton,
    pub estimates: Vec<Estimate>,
}

impl Observer {
    pub fn is_empty(&self) -> bool {
        self.automaton.is_empty()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.automaton.initial_state()
    }

    pub fn estimate(&self, s: StateId) -> &Estimate {
        &self.estimates[s]
    }

    /// Estimate of `s` as underlying state names.
    pub fn member_names(&self, s: StateId, underlying: &Automaton) -> BTreeSet<String> {
        self.estimates[s].members.iter().map(|&m| underlying.state(m).name.clone()).collect()
    }

    /// Quotient modulo `p`; blocks take the union of their estimates.
    pub fn quotient(&self, p: &Partition) -> Result<Observer> {
        let mut automaton = quotient(&self.automaton, p)?;
        let mut estimates = Vec::with_capacity(p.num_blocks());
        for (b, block) in p.blocks().iter().enumerate() {
            let members: BTreeSet<StateId> =
                block.iter().flat_map(|&s| self.estimates[s].members.iter().copied()).collect();
            let secret_only = block.iter().all(|&s| self.estimates[s].secret_only);
            automaton.state_mut(b).secret = secret_only;
            estimates.push(Estimate { members: members.into_iter().collect(), secret_only });
        }
        Ok(Observer { automaton, estimates })
    }

    fn restrict(&self, keep: &[bool]) -> Observer {
        let (automaton, old) = self.automaton.restrict(keep);
        let estimates = old.iter().map(|&s| self.estimates[s].clone()).collect();
        Observer { automaton, estimates }
    }
}

fn estimate_name(a: &Automaton, members: &BTreeSet<StateId>) -> String {
    let names: Vec<&str> = members.iter().map(|&m| a.state(m).name.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Smallest superset of `from` closed under unobservable transitions.
pub fn unobservable_reach(a: &Automaton, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    a.silent_closure(from)
}

/// Observer `det(a)` by subset construction over the observable events,
/// restricted to reachable estimates.
pub fn determinize(a: &Automaton) -> Observer {
    let mut obs = Automaton::new(format!("det({})", a.name()));
    let observable: Vec<usize> = (0..a.events().len()).filter(|&e| a.event(e).observable).collect();
    for &e in &observable {
        obs.add_event(a.event(e).clone()).expect("source alphabet is valid");
    }
    let mut estimates = Vec::new();
    let init: BTreeSet<StateId> = a.initial_states().into_iter().collect();
    let init = unobservable_reach(a, &init);
    if init.is_empty() {
        return Observer { automaton: obs, estimates };
    }

    let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
    let mut sets: Vec<BTreeSet<StateId>> = Vec::new();
    let mut intern = |set: BTreeSet<StateId>, initial: bool, obs: &mut Automaton, sets: &mut Vec<_>| -> StateId {
        if let Some(&id) = index.get(&set) {
            return id;
        }
        let secret_only = set.iter().all(|&m| a.state(m).secret);
        let id = obs
            .add_state(StateInfo {
                name: estimate_name(a, &set),
                initial,
                marked: set.iter().any(|&m| a.state(m).marked),
                secret: secret_only,
            })
            .expect("estimates are unique");
        estimates.push(Estimate { members: set.iter().copied().collect(), secret_only });
        index.insert(set.clone(), id);
        sets.push(set);
        id
    };
    intern(init, true, &mut obs, &mut sets);
    // states are interned in order, so `sets` doubles as the work queue
    let mut id = 0;
    while id < sets.len() {
        let current = sets[id].clone();
        for (k, &e) in observable.iter().enumerate() {
            let next = a.observable_step(&current, e);
            if !next.is_empty() {
                let t = intern(next, false, &mut obs, &mut sets);
                obs.add_transition(id, Label::Event(k), t);
            }
        }
        id += 1;
    }
    Observer { automaton: obs, estimates }
}

/// The desired observer: `o` without its secret-only estimates, restricted to
/// the part still reachable. Empty when the initial estimate is secret-only.
pub fn desired_observer(o: &Observer) -> Observer {
    let keep: Vec<bool> = o.estimates.iter().map(|e| !e.secret_only).collect();
    let pruned = o.restrict(&keep);
    let reach = pruned.automaton.reachable();
    let mut out = pruned.restrict(&reach);
    out.automaton.set_name(format!("desired({})", o.automaton.name()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpacityWitness {
    /// Shortest observation after which the estimate is secret-only.
    pub word: Word,
    /// The estimate, as underlying state names.
    pub estimate: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpacityReport {
    pub opaque: bool,
    pub witnesses: Vec<OpacityWitness>,
}

/// Current-state opacity: no reachable estimate lies inside the secret states.
pub fn check_current_state_opacity(a: &Automaton) -> OpacityReport {
    let obs = determinize(a);
    let mut witnesses = Vec::new();
    let Some(init) = obs.initial() else {
        return OpacityReport { opaque: true, witnesses };
    };
    // breadth first with events in name order: the first visit is the
    // shortest, lexicographically least word
    let auto = &obs.automaton;
    let mut order: Vec<(String, usize)> = auto.events().iter().enumerate().map(|(i, e)| (e.name.clone(), i)).collect();
    order.sort();
    let mut word_of: Vec<Option<Word>> = vec![None; auto.num_states()];
    word_of[init] = Some(Word::new());
    let mut queue = VecDeque::from([init]);
    while let Some(s) = queue.pop_front() {
        let word = word_of[s].clone().unwrap();
        if obs.estimates[s].secret_only {
            let mut names: Vec<String> = obs.estimates[s].members.iter().map(|&m| a.state(m).name.clone()).collect();
            names.sort();
            witnesses.push(OpacityWitness { word: word.clone(), estimate: names });
        }
        for (name, e) in &order {
            if let Some(t) = auto.targets(s, Label::Event(*e)).next() {
                if word_of[t].is_none() {
                    let mut w = word.clone();
                    w.push(name.clone());
                    word_of[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
    }
    OpacityReport { opaque: witnesses.is_empty(), witnesses }
}
