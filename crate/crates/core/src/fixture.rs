//! The two-component running example used throughout the tests, the
//! benchmarks and the CLI's `check` suites.
//!
//! `G1` over {γ, α} and `G2` over {β, α} each hide a τ-step behind their first
//! event and share the final α into a secret state.

use crate::automaton::{Automaton, EventId, StateInfo};

fn component(name: &str, prefix: &str, first: &str) -> Automaton {
    let mut a = Automaton::new(name);
    a.add_event(EventId::new(first)).unwrap();
    a.add_event(EventId::new("α")).unwrap();
    let s = |i: usize| format!("{prefix}{i}");
    a.add_state(StateInfo::new(s(0)).initial()).unwrap();
    a.add_state(StateInfo::new(s(1))).unwrap();
    a.add_state(StateInfo::new(s(2))).unwrap();
    a.add_state(StateInfo::new(s(3)).secret()).unwrap();
    a.add_transition_named(&s(0), first, &s(1)).unwrap();
    a.add_transition_named(&s(1), "tau", &s(2)).unwrap();
    a.add_transition_named(&s(1), "α", &s(3)).unwrap();
    a.add_transition_named(&s(2), "α", &s(3)).unwrap();
    a
}

pub fn g1() -> Automaton {
    component("G1", "q", "γ")
}

pub fn g2() -> Automaton {
    component("G2", "s", "β")
}

pub fn system() -> Vec<Automaton> {
    vec![g1(), g2()]
}

/// `G1` with every secret flag cleared.
pub fn g1_without_secrets() -> Automaton {
    let mut a = g1();
    for s in 0..a.num_states() {
        a.state_mut(s).secret = false;
    }
    a
}
