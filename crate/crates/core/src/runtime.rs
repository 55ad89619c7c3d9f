//! Executing an edit function extracted from a modular edit structure, one
//! genuine system event at a time.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{Label, StateId, Word};
use crate::error::{Error, Result};
use crate::synthesis::ModularEditStructure;
use crate::tpo::{run_string, Kind};
use crate::transform::{DecoratedEvent, DecorationKind};

/// How a session picks edit decisions when none are given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    /// Deliver the event unchanged if possible, else after the fewest
    /// insertions, else erase it.
    PassThroughPreferred,
    /// The shortest decision chain, ties broken by decision name.
    FirstLexicographic,
    /// Uniform choices among permitted decisions, reproducible from the seed.
    SeededRandom(u64),
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::PassThroughPreferred => write!(f, "pass-through"),
            Policy::FirstLexicographic => write!(f, "first"),
            Policy::SeededRandom(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    /// Accepts `pass-through`, `first`, `random` (seed 0) and `random:<seed>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pass-through" => Ok(Policy::PassThroughPreferred),
            "first" => Ok(Policy::FirstLexicographic),
            "random" => Ok(Policy::SeededRandom(0)),
            _ => s
                .strip_prefix("random:")
                .and_then(|n| n.parse().ok())
                .map(Policy::SeededRandom)
                .ok_or_else(|| format!("unknown policy `{s}` (expected pass-through, first or random[:seed])")),
        }
    }
}

/// What a session has seen and produced so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionTrace {
    /// Genuine system events consumed.
    pub consumed: Word,
    /// Edited output emitted.
    pub emitted: Word,
    /// Decorated events fired in the supervisor.
    pub trace: Vec<String>,
}

#[derive(Clone)]
pub struct Session<'a> {
    structure: &'a ModularEditStructure,
    current: StateId,
    record: SessionTrace,
    policy: Policy,
    rng: ChaCha8Rng,
    insertion_budget: usize,
}

pub fn open_session(structure: &ModularEditStructure, policy: Policy) -> Result<Session<'_>> {
    let current = structure.supervisor.initial_state().ok_or(Error::EmptySupervisor)?;
    let seed = match policy {
        Policy::SeededRandom(s) => s,
        _ => 0,
    };
    let z_states = (0..structure.supervisor.num_states()).filter(|&s| structure.origins(s).contains(&Kind::Z)).count();
    Ok(Session {
        structure,
        current,
        record: SessionTrace::default(),
        policy,
        rng: ChaCha8Rng::seed_from_u64(seed),
        insertion_budget: 2 * z_states,
    })
}

impl<'a> Session<'a> {
    pub fn current(&self) -> StateId {
        self.current
    }

    pub fn state_name(&self) -> &str {
        &self.structure.supervisor.state(self.current).name
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn trace(&self) -> &SessionTrace {
        &self.record
    }

    /// Enabled controllable decisions at the current state, by name.
    fn decisions_at(&self, s: StateId) -> Vec<(String, StateId)> {
        let sup = &self.structure.supervisor;
        let mut out: Vec<(String, StateId)> = sup
            .successors(s)
            .iter()
            .filter_map(|&(l, t)| match l {
                Label::Event(e) if sup.event(e).controllable => Some((sup.event(e).name.clone(), t)),
                _ => None,
            })
            .collect();
        out.sort();
        out
    }

    fn all_y(&self, s: StateId) -> bool {
        self.structure.origins(s).iter().all(|&k| k == Kind::Y)
    }

    /// Handles one genuine event: fires it, makes the edit decisions (from
    /// `overrides` first, then from the policy), delivers, and returns the
    /// edited output for this event.
    pub fn step(&mut self, event: &str, overrides: Option<&[String]>) -> Result<Word> {
        let structure = self.structure;
        let sup = &structure.supervisor;
        let not_enabled = || Error::EventNotEnabled { event: event.to_string(), state: self.state_name().to_string() };
        let is_system = event.parse::<DecoratedEvent>().is_ok_and(|d| d.kind == DecorationKind::System);
        if !is_system || !self.all_y(self.current) {
            return Err(not_enabled());
        }
        let mut at = sup.next(self.current, event).ok_or_else(not_enabled)?;
        let mut fired = vec![event.to_string()];

        let mut committed = false;
        for d in overrides.unwrap_or(&[]) {
            if committed {
                return Err(Error::ForbiddenDecision { decision: d.clone(), state: sup.state(at).name.clone() });
            }
            let next =
                self.decisions_at(at).into_iter().find(|(name, _)| name == d).ok_or_else(|| {
                    Error::ForbiddenDecision { decision: d.clone(), state: sup.state(at).name.clone() }
                })?;
            committed = is_final(&next.0);
            fired.push(next.0);
            at = next.1;
        }
        if !committed {
            for (name, t) in self.choose(at)? {
                fired.push(name);
                at = t;
            }
        }
        while !self.all_y(at) {
            let (l, t) = sup
                .successors(at)
                .iter()
                .copied()
                .find(|&(l, _)| {
                    sup.label_name(l)
                        .parse::<DecoratedEvent>()
                        .is_ok_and(|d| matches!(d.kind, DecorationKind::Deliver | DecorationKind::DeliverErased))
                })
                .ok_or_else(|| Error::MalformedRun(format!("no delivery at {}", sup.state(at).name)))?;
            fired.push(sup.label_name(l).to_string());
            at = t;
        }

        let symbols: Vec<_> =
            fired.iter().map(|n| n.parse::<DecoratedEvent>().map(|d| d.rename())).collect::<Result<_>>()?;
        let output = run_string(&symbols)?;
        self.current = at;
        self.record.consumed.push(event.to_string());
        self.record.emitted.extend(output.iter().cloned());
        self.record.trace.extend(fired);
        Ok(output)
    }

    /// Decision chain from Z tuple `at` ending in a stop or an erasure.
    fn choose(&mut self, at: StateId) -> Result<Vec<(String, StateId)>> {
        match self.policy {
            Policy::PassThroughPreferred => self.shortest_chain(at, |name| !name.starts_with("erz:")),
            Policy::FirstLexicographic => self.shortest_chain(at, |_| true),
            Policy::SeededRandom(_) => {
                let mut chain = Vec::new();
                let mut here = at;
                let mut insertions = 0;
                while insertions < self.insertion_budget {
                    let options = self.decisions_at(here);
                    let Some((name, t)) = options.choose(&mut self.rng).cloned() else { break };
                    chain.push((name.clone(), t));
                    here = t;
                    if is_final(&name) {
                        return Ok(chain);
                    }
                    insertions += 1;
                }
                chain.extend(self.shortest_chain(here, |_| true)?);
                Ok(chain)
            }
        }
    }

    /// Breadth-first over insertions in name order. The first state offering
    /// a final decision accepted by `preferred` wins; failing that, the first
    /// state offering any final decision.
    fn shortest_chain(&self, at: StateId, preferred: impl Fn(&str) -> bool) -> Result<Vec<(String, StateId)>> {
        let mut parent: HashMap<StateId, (StateId, String)> = HashMap::new();
        let mut order = vec![at];
        let mut queue = VecDeque::from([at]);
        while let Some(s) = queue.pop_front() {
            for (name, t) in self.decisions_at(s) {
                if !is_final(&name) && t != at && !parent.contains_key(&t) {
                    parent.insert(t, (s, name));
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let pick = |accept: &dyn Fn(&str) -> bool| {
            order.iter().find_map(|&s| {
                self.decisions_at(s).into_iter().find(|(name, _)| is_final(name) && accept(name)).map(|d| (s, d))
            })
        };
        let (mut s, last) = pick(&preferred).or_else(|| pick(&|_| true)).ok_or_else(|| {
            Error::MalformedRun(format!("no decision completes at {}", self.structure.supervisor.state(at).name))
        })?;
        let mut chain = vec![last];
        while s != at {
            let (p, name) = parent[&s].clone();
            chain.push((name, s));
            s = p;
        }
        chain.reverse();
        Ok(chain)
    }
}

fn is_final(decision: &str) -> bool {
    decision.starts_with("stop@") || decision.starts_with("erz:")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::synthesis::{synthesize_modular_edit_structure, SynthesisOptions};

    fn rf() -> ModularEditStructure {
        synthesize_modular_edit_structure(&fixture::system(), 1, &SynthesisOptions::default()).unwrap()
    }

    fn w(s: &[&str]) -> Word {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn d(s: &[&str]) -> Vec<String> {
        w(s)
    }

    #[test]
    fn selected_path_by_overrides() {
        let m = rf();
        let mut s = open_session(&m, Policy::PassThroughPreferred).unwrap();
        assert_eq!(s.trace(), &SessionTrace::default());
        assert_eq!(s.step("γ", Some(&d(&["erz:γ@γ"]))).unwrap(), w(&[]));
        assert_eq!(s.step("β", Some(&d(&["stop@β"]))).unwrap(), w(&["β"]));
        assert_eq!(s.step("α", Some(&d(&["ins:γ@α", "erz:α@α"]))).unwrap(), w(&["γ"]));
        let t = s.trace();
        assert_eq!(t.consumed, w(&["γ", "β", "α"]));
        assert_eq!(t.emitted, w(&["β", "γ"]));
        assert_eq!(
            t.trace,
            w(&["γ", "erz:γ@γ", "drop:γ@γ", "β", "stop@β", "out:β@β", "α", "ins:γ@α", "erz:α@α", "drop:α@α"])
        );
    }

    #[test]
    fn pass_through_policy_delivers_first_event() {
        let m = rf();
        let mut s = open_session(&m, Policy::PassThroughPreferred).unwrap();
        assert_eq!(s.step("γ", None).unwrap(), w(&["γ"]));
    }

    #[test]
    fn errors() {
        let m = rf();
        let mut s = open_session(&m, Policy::PassThroughPreferred).unwrap();
        assert!(matches!(s.step("δ", None), Err(Error::EventNotEnabled { .. })));
        assert!(matches!(s.step("α", None), Err(Error::EventNotEnabled { .. })));
        assert!(matches!(s.step("stop@γ", None), Err(Error::EventNotEnabled { .. })));
        assert!(matches!(s.step("γ", Some(&d(&["ins:α@β"]))), Err(Error::ForbiddenDecision { .. })));
        // a failed step leaves the session untouched
        assert!(s.trace().consumed.is_empty());
        assert_eq!(s.step("γ", None).unwrap(), w(&["γ"]));
    }

    #[test]
    fn policies_are_deterministic() {
        let m = rf();
        for policy in [Policy::PassThroughPreferred, Policy::FirstLexicographic, Policy::SeededRandom(7)] {
            let run = || {
                let mut s = open_session(&m, policy).unwrap();
                for e in ["β", "γ", "α"] {
                    s.step(e, None).unwrap();
                }
                s.trace().clone()
            };
            assert_eq!(run(), run());
        }
    }

    #[test]
    fn policy_names() {
        for p in [Policy::PassThroughPreferred, Policy::FirstLexicographic, Policy::SeededRandom(42)] {
            assert_eq!(p.to_string().parse::<Policy>().unwrap(), p);
        }
        assert_eq!("random".parse::<Policy>().unwrap(), Policy::SeededRandom(0));
        assert!("best".parse::<Policy>().is_err());
    }
}
