//! Supremal controllable and nonblocking supervision over the transformed
//! components and the erasure constraint: the modular edit structure.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abstraction::{abstract_component, AbstractionBundle};
use crate::automaton::{sync_product, Automaton, Label, Product, StateId};
use crate::constraint::constraint_for_plant;
use crate::error::{Error, Result};
use crate::tpo::{build_largest_tpo, Kind};
use crate::transform::{augment_missing_insertions, compose_components, transform_modular, TransformedAutomaton};

/// Synchronizes the (possibly augmented) component product `base` with the
/// constraint automaton `k`. Tuples list the component states followed by
/// the state of `k`; states are named `(c1|c2|…|K:xj)`.
pub fn attach_constraint(components: &[TransformedAutomaton], base: &Product, k: &Automaton) -> Result<Product> {
    let joint = sync_product(&[&base.automaton, k], "plant")?;
    let tuples: Vec<Vec<StateId>> = joint
        .tuples
        .iter()
        .map(|t| {
            let mut v = base.tuples[t[0]].clone();
            v.push(t[1]);
            v
        })
        .collect();
    let names = tuples
        .iter()
        .map(|t| {
            let (kx, parts) = t.split_last().unwrap();
            let mut names: Vec<String> =
                parts.iter().zip(components).map(|(&s, c)| c.automaton.state(s).name.clone()).collect();
            names.push(format!("K:{}", k.state(*kx).name));
            format!("({})", names.join("|"))
        })
        .collect();
    let automaton = joint.automaton.with_state_names(names)?;
    Ok(Product { automaton, tuples })
}

/// Synchronous product of the components and the constraint automaton.
pub fn product_plant(components: &[TransformedAutomaton], k: &Automaton) -> Result<Product> {
    attach_constraint(components, &compose_components(components)?, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovalReason {
    Blocking,
    Uncontrollable,
}

/// One pass of the synthesis fixpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pass {
    pub iteration: usize,
    pub reason: RemovalReason,
    pub removed: usize,
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = match self.reason {
            RemovalReason::Blocking => "blocking",
            RemovalReason::Uncontrollable => "uncontrollable",
        };
        write!(f, "iteration {}: removed {} {}", self.iteration, self.removed, reason)
    }
}

#[derive(Clone, Debug)]
pub struct Supervision {
    pub supervisor: Automaton,
    /// Plant state of each supervisor state.
    pub kept: Vec<StateId>,
    pub log: Vec<Pass>,
}

/// The supremal controllable and nonblocking subautomaton of `plant`.
///
/// Each iteration first removes states that cannot reach a marked state and
/// then states with an uncontrollable transition into a removed state, until
/// neither pass removes anything; the result is restricted to the states
/// still reachable. An empty result means no supervisor exists.
pub fn supremal_controllable_nonblocking(plant: &Automaton) -> Supervision {
    let n = plant.num_states();
    let mut alive = plant.reachable();
    let mut log = Vec::new();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (s, _, t) in plant.transitions() {
        preds[t].push(s);
    }
    for iteration in 1.. {
        let mut coreach = vec![false; n];
        let mut stack: Vec<StateId> = (0..n).filter(|&s| alive[s] && plant.state(s).marked).collect();
        for &s in &stack {
            coreach[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if alive[p] && !coreach[p] {
                    coreach[p] = true;
                    stack.push(p);
                }
            }
        }
        let blocking = (0..n).filter(|&s| alive[s] && !coreach[s]).count();
        for s in 0..n {
            alive[s] &= coreach[s];
        }
        log.push(Pass { iteration, reason: RemovalReason::Blocking, removed: blocking });

        let mut uncontrollable = 0;
        let mut stack: Vec<StateId> = (0..n).filter(|&s| !alive[s]).collect();
        while let Some(t) = stack.pop() {
            for &p in &preds[t] {
                if alive[p] && plant.successors(p).iter().any(|&(l, x)| x == t && is_uncontrollable(plant, l)) {
                    alive[p] = false;
                    uncontrollable += 1;
                    stack.push(p);
                }
            }
        }
        log.push(Pass { iteration, reason: RemovalReason::Uncontrollable, removed: uncontrollable });
        if blocking == 0 && uncontrollable == 0 {
            break;
        }
    }

    let init_alive = plant.initial_state().is_some_and(|s| alive[s]);
    let mut keep = vec![false; n];
    if init_alive {
        let (restricted, old) = plant.restrict(&alive);
        for (i, r) in restricted.reachable().into_iter().enumerate() {
            keep[old[i]] = r;
        }
    }
    let (mut supervisor, kept) = plant.restrict(&keep);
    supervisor.set_name(format!("sup({})", plant.name()));
    Supervision { supervisor, kept, log }
}

fn is_uncontrollable(a: &Automaton, l: Label) -> bool {
    match l {
        Label::Tau => true,
        Label::Event(e) => !a.event(e).controllable,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    /// Add back the insertions the modular product cannot express.
    pub augment: bool,
}

/// The synthesized modular edit structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularEditStructure {
    pub k: usize,
    pub augmented: bool,
    pub components: Vec<TransformedAutomaton>,
    pub spec: Automaton,
    pub plant_states: usize,
    pub supervisor: Automaton,
    /// For each supervisor state, its component states followed by the
    /// state of the constraint automaton.
    pub tuples: Vec<Vec<StateId>>,
    pub log: Vec<Pass>,
}

impl ModularEditStructure {
    pub fn is_empty(&self) -> bool {
        self.supervisor.is_empty()
    }

    /// Origin kinds of the components at supervisor state `s`.
    pub fn origins(&self, s: StateId) -> Vec<Kind> {
        self.components.iter().zip(&self.tuples[s]).map(|(c, &x)| c.origin(x)).collect()
    }

    pub fn removed_states(&self) -> usize {
        self.plant_states - self.supervisor.num_states()
    }
}

/// Runs the whole pipeline on the components `systems` with at most `k`
/// consecutive erasures.
pub fn synthesize_modular_edit_structure(
    systems: &[Automaton],
    k: usize,
    options: &SynthesisOptions,
) -> Result<ModularEditStructure> {
    if systems.is_empty() {
        return Err(Error::NoComponents);
    }
    let bundles: Vec<AbstractionBundle> = systems.iter().map(abstract_component).collect::<Result<_>>()?;
    if let Some(index) = bundles.iter().position(|b| !b.is_enforceable()) {
        return Err(Error::Unenforceable { index, name: systems[index].name().to_string() });
    }
    let tpos: Vec<_> = bundles.iter().map(|b| build_largest_tpo(&b.h_obd, &b.h_b)).collect();
    let alphabets: Vec<BTreeSet<String>> = tpos.iter().map(|t| t.alphabet.iter().cloned().collect()).collect();
    let components = transform_modular(&tpos, &alphabets)?;

    let names = components.iter().flat_map(|c| c.automaton.events().iter().map(|e| e.name.as_str()));
    let spec = constraint_for_plant(k, names)?;
    let base = if options.augment {
        augment_missing_insertions(&components, &bundles)?
    } else {
        compose_components(&components)?
    };
    let plant = attach_constraint(&components, &base, &spec)?;
    let sup = supremal_controllable_nonblocking(&plant.automaton);
    let tuples = sup.kept.iter().map(|&s| plant.tuples[s].clone()).collect();
    Ok(ModularEditStructure {
        k,
        augmented: options.augment,
        components,
        spec,
        plant_states: plant.automaton.num_states(),
        supervisor: sup.supervisor,
        tuples,
        log: sup.log,
    })
}
