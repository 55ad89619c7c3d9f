//! The specification automaton for the bound on consecutive erasures.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, Label, StateInfo};
use crate::error::{Error, Result};
use crate::transform::{DecoratedEvent, DecorationKind};

/// Default limit on the number of states of the constraint automaton.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    /// Maximum number of consecutive erasures.
    pub k: usize,
    /// Insertion, stop and erasure events of the plant.
    pub decision_events: BTreeSet<DecoratedEvent>,
    pub state_budget: usize,
}

impl ConstraintSpec {
    /// Collects the decision events from plant alphabets, ignoring any
    /// event name that is not a decision.
    pub fn from_alphabets<'a>(k: usize, names: impl IntoIterator<Item = &'a str>) -> Self {
        let decision_events = names
            .into_iter()
            .filter_map(|n| n.parse::<DecoratedEvent>().ok())
            .filter(DecoratedEvent::is_controllable)
            .collect();
        ConstraintSpec { k, decision_events, state_budget: DEFAULT_STATE_BUDGET }
    }
}

/// Builds `K`: states `x1 … x(k+2)`. Erasures advance one state, insertions
/// and stops return to `x1`, and `x(k+2)` is an unmarked dead end. The
/// alphabet holds the decision events only, so system and delivery events are
/// left unconstrained by synchronization.
pub fn build_constraint_automaton(c: &ConstraintSpec) -> Result<Automaton> {
    if c.decision_events.is_empty() {
        return Err(Error::EmptyDecisionAlphabet);
    }
    let n = c.k.checked_add(2).filter(|&n| n <= c.state_budget);
    let Some(n) = n else {
        return Err(Error::ConstraintBudget { needed: c.k.saturating_add(2), budget: c.state_budget });
    };
    let mut a = Automaton::new(format!("K{}", c.k));
    for i in 1..=n {
        let mut info = StateInfo::new(format!("x{i}"));
        info.initial = i == 1;
        info.marked = i < n;
        a.add_state(info)?;
    }
    for ev in &c.decision_events {
        let idx = a.add_event(ev.event_id())?;
        let label = Label::Event(idx);
        for i in 0..n - 1 {
            if ev.kind == DecorationKind::Erase {
                a.add_transition(i, label, i + 1);
            } else {
                a.add_transition(i, label, 0);
            }
        }
    }
    Ok(a)
}

/// The constraint automaton for a plant whose events are `names`. A plant
/// without any decision gets a single marked state with an empty alphabet.
pub fn constraint_for_plant<'a>(k: usize, names: impl IntoIterator<Item = &'a str>) -> Result<Automaton> {
    match build_constraint_automaton(&ConstraintSpec::from_alphabets(k, names)) {
        Err(Error::EmptyDecisionAlphabet) => {
            let mut a = Automaton::new(format!("K{k}"));
            a.add_state(StateInfo::new("x1").initial().marked())?;
            Ok(a)
        }
        other => other,
    }
}
