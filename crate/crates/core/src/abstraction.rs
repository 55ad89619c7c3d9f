//! Coarsest stable partitions for strong bisimulation, observation
//! equivalence and their secrecy-respecting variants, and the per-component
//! abstraction that feeds three-player observer construction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::{quotient, Automaton, Label, Partition, StateId};
use crate::error::Result;
use crate::estimation::{desired_observer, determinize, Observer};

/// Outcome of a refinement run.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub partition: Partition,
    /// Number of refinement rounds that split at least one block.
    pub rounds: usize,
}

/// Coarsest partition refining `initial` that is stable for `edges`: two
/// states share a block only if they reach the same blocks on the same labels.
///
/// Signature refinement; each round either splits a block or stops, so at
/// most `n` rounds run.
pub fn refine<L: Ord + Clone>(initial: &Partition, edges: &[Vec<(L, StateId)>]) -> Refinement {
    let mut current = initial.clone();
    let mut rounds = 0;
    loop {
        let signatures: Vec<(usize, BTreeSet<(L, usize)>)> = edges
            .iter()
            .enumerate()
            .map(|(s, out)| {
                let sig = out.iter().map(|(l, t)| (l.clone(), current.block_of(*t))).collect();
                (current.block_of(s), sig)
            })
            .collect();
        let next = Partition::from_labels(&signatures);
        if next.num_blocks() == current.num_blocks() {
            return Refinement { partition: current, rounds };
        }
        current = next;
        rounds += 1;
    }
}

/// Labels of the τ-saturated transition relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WeakLabel {
    Epsilon,
    Observable(usize),
}

/// Weak transitions `x ⇒ε y` (including `x ⇒ε x`) and `x ⇒σ y` for every
/// observable σ.
pub fn saturate(a: &Automaton) -> Vec<Vec<(WeakLabel, StateId)>> {
    let closures: Vec<BTreeSet<StateId>> =
        (0..a.num_states()).map(|s| a.silent_closure(&BTreeSet::from([s]))).collect();
    (0..a.num_states())
        .map(|s| {
            let mut out = BTreeSet::new();
            for &m in &closures[s] {
                out.insert((WeakLabel::Epsilon, m));
                for &(l, t) in a.successors(m) {
                    if let Label::Event(e) = l {
                        if !a.is_silent(l) {
                            for &u in &closures[t] {
                                out.insert((WeakLabel::Observable(e), u));
                            }
                        }
                    }
                }
            }
            out.into_iter().collect()
        })
        .collect()
}

fn secrecy_split(a: &Automaton) -> Partition {
    Partition::from_labels(&a.states().iter().map(|s| s.secret).collect::<Vec<_>>())
}

fn strong_edges(a: &Automaton) -> Vec<Vec<(Label, StateId)>> {
    (0..a.num_states()).map(|s| a.successors(s).to_vec()).collect()
}

/// Coarsest opaque observation equivalence: weak-transition stable blocks
/// that never mix secret and non-secret states.
pub fn opaque_observation_equivalence_partition(a: &Automaton) -> Partition {
    refine(&secrecy_split(a), &saturate(a)).partition
}

/// Coarsest strong bisimulation, τ treated as an ordinary label.
pub fn bisimulation_partition(a: &Automaton) -> Partition {
    refine(&Partition::universal(a.num_states()), &strong_edges(a)).partition
}

/// Coarsest strong bisimulation on an observer that keeps secret-only and
/// other estimates apart.
pub fn opaque_bisimulation_partition(o: &Observer) -> Partition {
    let init = Partition::from_labels(&o.estimates.iter().map(|e| e.secret_only).collect::<Vec<_>>());
    refine(&init, &strong_edges(&o.automaton)).partition
}

/// The four abstractions of one component.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbstractionBundle {
    /// Quotient of the component by opaque observation equivalence.
    pub g_abstracted: Automaton,
    /// Opaque-bisimulation quotient of the abstracted component's observer.
    pub h_ob: Observer,
    /// Plain-bisimulation quotient of the abstracted component's observer.
    pub h_b: Observer,
    /// Desired observer of `h_ob`.
    pub h_obd: Observer,
}

impl AbstractionBundle {
    /// False when the desired observer is empty and no edit function can
    /// enforce opacity for this component.
    pub fn is_enforceable(&self) -> bool {
        !self.h_obd.is_empty()
    }
}

pub fn abstract_component(g: &Automaton) -> Result<AbstractionBundle> {
    let g_abstracted = quotient(g, &opaque_observation_equivalence_partition(g))?;
    let det = determinize(&g_abstracted);
    let h_ob = det.quotient(&opaque_bisimulation_partition(&det))?;
    let h_b = det.quotient(&bisimulation_partition(&det.automaton))?;
    let h_obd = desired_observer(&h_ob);
    Ok(AbstractionBundle { g_abstracted, h_ob, h_b, h_obd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{is_subautomaton, EventId, StateInfo};
    use crate::fixture;

    fn blocks(a: &Automaton, p: &Partition) -> BTreeSet<BTreeSet<String>> {
        p.named_blocks(a)
    }

    fn lit(b: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
        b.iter().map(|x| x.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn rf_components_merge_tau_twins() {
        let g1 = fixture::g1();
        let p = opaque_observation_equivalence_partition(&g1);
        assert_eq!(blocks(&g1, &p), lit(&[&["q0"], &["q1", "q2"], &["q3"]]));
        let g2 = fixture::g2();
        let p = opaque_observation_equivalence_partition(&g2);
        assert_eq!(blocks(&g2, &p), lit(&[&["s0"], &["s1", "s2"], &["s3"]]));
    }

    #[test]
    fn secrecy_forces_singletons() {
        let mut a = Automaton::new("a");
        a.add_event(EventId::new("x")).unwrap();
        a.add_state(StateInfo::new("p").initial()).unwrap();
        a.add_state(StateInfo::new("r").secret()).unwrap();
        // identical futures, different secrecy
        assert_eq!(opaque_observation_equivalence_partition(&a).num_blocks(), 2);
        assert_eq!(bisimulation_partition(&a).num_blocks(), 1);
    }

    fn twins() -> Automaton {
        let mut a = Automaton::new("twins");
        a.add_event(EventId::new("x")).unwrap();
        a.add_event(EventId::new("y")).unwrap();
        for n in ["r", "b1", "b2", "e1", "e2"] {
            a.add_state(StateInfo::new(n)).unwrap();
        }
        a.state_mut(0).initial = true;
        for (f, e, t) in [("r", "x", "b1"), ("r", "x", "b2"), ("b1", "y", "e1"), ("b2", "y", "e2")] {
            a.add_transition_named(f, e, t).unwrap();
        }
        a
    }

    #[test]
    fn bisimulation_merges_parallel_branches() {
        let a = twins();
        let p = bisimulation_partition(&a);
        assert_eq!(blocks(&a, &p), lit(&[&["r"], &["b1", "b2"], &["e1", "e2"]]));
    }

    #[test]
    fn minimal_deterministic_is_identity() {
        let det =
            determinize(&quotient(&fixture::g1(), &opaque_observation_equivalence_partition(&fixture::g1())).unwrap());
        assert_eq!(bisimulation_partition(&det.automaton).num_blocks(), 3);
        assert_eq!(opaque_bisimulation_partition(&det).num_blocks(), 3);
    }

    #[test]
    fn opaque_bisimulation_on_sinks() {
        let mut a = Automaton::new("sinks");
        a.add_event(EventId::new("x")).unwrap();
        a.add_event(EventId::new("y")).unwrap();
        a.add_state(StateInfo::new("r").initial()).unwrap();
        a.add_state(StateInfo::new("s1").secret()).unwrap();
        a.add_state(StateInfo::new("s2").secret()).unwrap();
        a.add_transition_named("r", "x", "s1").unwrap();
        a.add_transition_named("r", "y", "s2").unwrap();
        let o = determinize(&a);
        assert_eq!(opaque_bisimulation_partition(&o).num_blocks(), 2);

        a.state_mut(2).secret = false;
        let o = determinize(&a);
        assert_eq!(opaque_bisimulation_partition(&o).num_blocks(), 3);
    }

    #[test]
    fn bundle_of_g1() {
        let b = abstract_component(&fixture::g1()).unwrap();
        assert_eq!(b.g_abstracted.num_states(), 3);
        assert_eq!(b.h_b.automaton.num_states(), 3);
        assert_eq!(b.h_ob.automaton.num_states(), 3);
        assert_eq!(b.h_obd.automaton.num_states(), 2);
        assert!(is_subautomaton(&b.h_obd.automaton, &b.h_ob.automaton));
        assert!(b.is_enforceable());
    }

    #[test]
    fn all_secret_component_is_unenforceable() {
        let mut g = fixture::g1();
        for s in 0..g.num_states() {
            g.state_mut(s).secret = true;
        }
        let b = abstract_component(&g).unwrap();
        assert!(b.h_obd.is_empty());
        assert!(!b.is_enforceable());
    }

    #[test]
    fn refinement_rounds_are_bounded() {
        let a = twins();
        let r = refine(&Partition::universal(5), &strong_edges(&a));
        assert!(r.rounds <= a.num_states());
    }
}
