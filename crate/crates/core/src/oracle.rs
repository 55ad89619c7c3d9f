//! Independent checks of the construction on small instances: random system
//! generation, structural equivalence oracles, and exhaustive replay of the
//! synthesized edit functions.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abstraction::{abstract_component, refine};
use crate::automaton::{
    deterministic_isomorphic, sync_compose, sync_product, Automaton, EventId, Label, Partition, StateId, StateInfo,
    Word,
};
use crate::constraint::constraint_for_plant;
use crate::error::{Error, Result};
use crate::estimation::{desired_observer, determinize, Observer};
use crate::fixture;
use crate::runtime::{open_session, Policy};
use crate::synthesis::{
    product_plant, supremal_controllable_nonblocking, synthesize_modular_edit_structure, ModularEditStructure,
    SynthesisOptions,
};
use crate::tpo::{build_largest_tpo, prune_to_aes, EdgeClass, EditSymbol, Kind, Tpo};
use crate::transform::{compose_components, transform_modular, transform_monolithic, DecoratedEvent, DecorationKind};

/// Bounds for random automata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub max_states: usize,
    pub alphabet_size: usize,
    pub tau_density: f64,
    pub secret_density: f64,
    /// Probability that a state has a transition on a given event.
    pub transition_density: f64,
}

impl RandomSpec {
    pub fn new(seed: u64) -> Self {
        RandomSpec {
            seed,
            max_states: 8,
            alphabet_size: 3,
            tau_density: 0.3,
            secret_density: 0.3,
            transition_density: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.max_states == 0 {
            return Err(Error::InvalidRandomSpec("max_states must be at least 1".into()));
        }
        if self.alphabet_size == 0 || self.alphabet_size > 26 {
            return Err(Error::InvalidRandomSpec("alphabet_size must be within 1..=26".into()));
        }
        if !(unit(self.tau_density) && unit(self.secret_density) && unit(self.transition_density)) {
            return Err(Error::InvalidRandomSpec("densities must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

fn random_over(rng: &mut ChaCha8Rng, spec: &RandomSpec, name: &str, prefix: &str, events: &[String]) -> Automaton {
    let mut a = Automaton::new(name);
    for e in events {
        a.add_event(EventId::new(e.clone())).expect("letters are distinct");
    }
    let n = rng.gen_range(1..=spec.max_states);
    for i in 0..n {
        let mut info = StateInfo::new(format!("{prefix}{i}"));
        info.initial = i == 0;
        info.secret = rng.gen_bool(spec.secret_density);
        a.add_state(info).expect("names are distinct");
    }
    for s in 0..n {
        for e in 0..events.len() {
            if rng.gen_bool(spec.transition_density) {
                a.add_transition(s, Label::Event(e), rng.gen_range(0..n));
                if rng.gen_bool(spec.transition_density / 2.0) {
                    a.add_transition(s, Label::Event(e), rng.gen_range(0..n));
                }
            }
        }
        if rng.gen_bool(spec.tau_density) {
            a.add_transition(s, Label::Tau, rng.gen_range(0..n));
        }
    }
    a.trim_reachable()
}

/// A seed-determined nondeterministic automaton over the first
/// `alphabet_size` lowercase letters, trimmed to its reachable part.
pub fn random_system(spec: &RandomSpec) -> Result<Automaton> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(random_over(&mut rng, spec, &format!("R{}", spec.seed), "x", &letters(spec.alphabet_size)))
}

/// Two random automata over random nonempty subsets of a common alphabet.
pub fn random_pair(spec: &RandomSpec) -> Result<(Automaton, Automaton)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pool = letters(spec.alphabet_size);
    let pick = |rng: &mut ChaCha8Rng| -> Vec<String> {
        let mut v: Vec<String> = pool.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        if v.is_empty() {
            v.push(pool[rng.gen_range(0..pool.len())].clone());
        }
        v
    };
    let e1 = pick(&mut rng);
    let e2 = pick(&mut rng);
    let a = random_over(&mut rng, spec, &format!("A{}", spec.seed), "p", &e1);
    let b = random_over(&mut rng, spec, &format!("B{}", spec.seed), "r", &e2);
    Ok((a, b))
}

/// Observer of a composition against the composition of observers.
pub fn check_observer_sync(a: &Automaton, b: &Automaton) -> Result<bool> {
    let left = determinize(&sync_compose(a, b)?).automaton;
    let right = sync_compose(&determinize(a).automaton, &determinize(b).automaton)?;
    deterministic_isomorphic(&left, &right)
}

/// Desired observer of a composition against the composition of desired
/// observers.
pub fn check_desired_observer_sync(a: &Automaton, b: &Automaton) -> Result<bool> {
    let left = desired_observer(&determinize(&sync_compose(a, b)?)).automaton;
    let da = desired_observer(&determinize(a)).automaton;
    let db = desired_observer(&determinize(b)).automaton;
    deterministic_isomorphic(&left, &sync_compose(&da, &db)?)
}

/// Edges per state, a label per state and the root.
type Rooted<'a, L, K> = (&'a [Vec<(L, usize)>], &'a [K], usize);

/// Coarsest stable partition of the disjoint union of two edge relations,
/// starting from `initial` labels; returns whether the roots share a block.
fn jointly_bisimilar<L: Ord + Clone, K: Ord + Clone>(left: Rooted<'_, L, K>, right: Rooted<'_, L, K>) -> bool {
    let offset = left.0.len();
    let mut edges: Vec<Vec<(L, usize)>> = left.0.to_vec();
    edges.extend(right.0.iter().map(|out| out.iter().map(|(l, t)| (l.clone(), t + offset)).collect()));
    let keys: Vec<K> = left.1.iter().chain(right.1).cloned().collect();
    let p = refine(&Partition::from_labels(&keys), &edges).partition;
    p.block_of(left.2) == p.block_of(right.2 + offset)
}

fn named_edges(a: &Automaton) -> Vec<Vec<(String, usize)>> {
    (0..a.num_states())
        .map(|s| a.successors(s).iter().map(|&(l, t)| (a.label_name(l).to_string(), t)).collect())
        .collect()
}

/// Strong bisimilarity of the initial states of two automata, by event name.
pub fn bisimilar(a: &Automaton, b: &Automaton) -> bool {
    match (a.initial_state(), b.initial_state()) {
        (None, None) => true,
        (Some(x), Some(y)) => jointly_bisimilar(
            (&named_edges(a), &vec![(); a.num_states()], x),
            (&named_edges(b), &vec![(); b.num_states()], y),
        ),
        _ => false,
    }
}

/// An observer and the observer of the abstracted system are bisimilar, and
/// so are their desired observers.
pub fn check_abstraction_preserves_observers(g: &Automaton) -> Result<bool> {
    let b = abstract_component(g)?;
    let det = determinize(g);
    let det_abs = determinize(&b.g_abstracted);
    Ok(bisimilar(&det.automaton, &det_abs.automaton)
        && bisimilar(&desired_observer(&det).automaton, &desired_observer(&det_abs).automaton))
}

/// The desired observer of a system is bisimilar to the desired observer of
/// the opaque-bisimulation quotient used by the abstraction.
pub fn check_desired_observer_abstraction(g: &Automaton) -> Result<bool> {
    let b = abstract_component(g)?;
    Ok(bisimilar(&desired_observer(&determinize(g)).automaton, &b.h_obd.automaton))
}

/// Bisimilarity of two TPOs with edges matched on transition class and
/// symbol and states matched on kind.
pub fn tpo_bisimilar(t1: &Tpo, t2: &Tpo) -> bool {
    let edges = |t: &Tpo| -> Vec<Vec<((EdgeClass, EditSymbol), usize)>> {
        t.edges.iter().map(|out| out.iter().map(|e| ((e.class, e.symbol.clone()), e.target)).collect()).collect()
    };
    let kinds = |t: &Tpo| -> Vec<Kind> { t.states.iter().map(|s| s.kind).collect() };
    match (t1.initial, t2.initial) {
        (None, None) => true,
        (Some(x), Some(y)) => jointly_bisimilar((&edges(t1), &kinds(t1), x), (&edges(t2), &kinds(t2), y)),
        _ => false,
    }
}

/// The largest TPO of `g` against the largest TPO of its abstraction.
pub fn check_tpo_abstraction(g: &Automaton) -> Result<bool> {
    let det = determinize(g);
    let direct = build_largest_tpo(&desired_observer(&det), &det);
    let b = abstract_component(g)?;
    let abstracted = build_largest_tpo(&b.h_obd, &b.h_b);
    Ok(tpo_bisimilar(&direct, &abstracted))
}

fn monolithic_tpo(systems: &[Automaton]) -> Result<Tpo> {
    let parts: Vec<&Automaton> = systems.iter().collect();
    let g = sync_product(&parts, "G")?.automaton;
    let det = determinize(&g);
    Ok(build_largest_tpo(&desired_observer(&det), &det))
}

/// Every trace of the modular product of transformed components, up to
/// `depth` events, maps under renaming onto a path of the monolithic largest
/// TPO with matching transition classes. With `abstracted`, the components
/// are built from the abstraction pipeline instead of plain observers.
pub fn check_modular_inclusion(systems: &[Automaton], depth: usize, abstracted: bool) -> Result<bool> {
    let mut tpos = Vec::new();
    for g in systems {
        let t = if abstracted {
            let b = abstract_component(g)?;
            build_largest_tpo(&b.h_obd, &b.h_b)
        } else {
            let det = determinize(g);
            build_largest_tpo(&desired_observer(&det), &det)
        };
        tpos.push(t);
    }
    let alphabets: Vec<BTreeSet<String>> = tpos.iter().map(|t| t.alphabet.iter().cloned().collect()).collect();
    let components = transform_modular(&tpos, &alphabets)?;
    let product = compose_components(&components)?.automaton;
    let mono = monolithic_tpo(systems)?;
    let (Some(p0), Some(t0)) = (product.initial_state(), mono.initial) else {
        return Ok(product.initial_state().is_none());
    };
    let decorations: Vec<DecoratedEvent> = product.events().iter().map(|e| e.name.parse()).collect::<Result<_>>()?;
    let mut seen = HashSet::from([(p0, t0)]);
    let mut frontier = vec![(p0, t0)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (p, t) in frontier {
            for &(l, p2) in product.successors(p) {
                let Label::Event(e) = l else { return Ok(false) };
                let d = &decorations[e];
                let (class, symbol) = (d.class(), d.rename());
                let Some(edge) = mono.edges[t].iter().find(|x| x.class == class && x.symbol == symbol) else {
                    return Ok(false);
                };
                if seen.insert((p2, edge.target)) {
                    next.push((p2, edge.target));
                }
            }
        }
        frontier = next;
    }
    Ok(true)
}

/// Relabels an automaton over decorated events with `(class, renamed
/// symbol)` labels.
fn relabel_by_class(a: &Automaton, marked: impl Fn(StateId) -> bool) -> Result<Automaton> {
    let mut out = Automaton::new(a.name());
    for s in 0..a.num_states() {
        let mut info = StateInfo::new(a.state(s).name.clone());
        info.initial = a.state(s).initial;
        info.marked = marked(s);
        out.add_state(info)?;
    }
    for (s, l, t) in a.transitions() {
        let d: DecoratedEvent = a.label_name(l).parse()?;
        let name = format!("{:?}|{}", d.class(), d.rename());
        let e = out.ensure_event(EventId::new(name))?;
        out.add_transition(s, Label::Event(e), t);
    }
    Ok(out)
}

fn tpo_as_automaton(t: &Tpo) -> Result<Automaton> {
    let mut out = Automaton::new("aes");
    for (s, st) in t.states.iter().enumerate() {
        let mut info = StateInfo::new(t.names[s].clone());
        info.initial = t.initial == Some(s);
        info.marked = st.kind == Kind::Y;
        out.add_state(info)?;
    }
    for (s, edges) in t.edges.iter().enumerate() {
        for edge in edges {
            let e = out.ensure_event(EventId::new(format!("{:?}|{}", edge.class, edge.symbol)))?;
            out.add_transition(s, Label::Event(e), edge.target);
        }
    }
    Ok(out)
}

/// Synthesis over the monolithic transformed automaton and the constraint
/// automaton agrees, up to renaming, with pruning the largest TPO directly.
pub fn check_supervisor_equals_aes(g: &Automaton, k: usize) -> Result<bool> {
    let det = determinize(g);
    let t = build_largest_tpo(&desired_observer(&det), &det);
    let m = transform_monolithic(&t);
    let spec = constraint_for_plant(k, m.automaton.events().iter().map(|e| e.name.as_str()))?;
    let plant = product_plant(std::slice::from_ref(&m), &spec)?;
    let sup = supremal_controllable_nonblocking(&plant.automaton);
    let sup_marked = |s: StateId| m.origin(plant.tuples[sup.kept[s]][0]) == Kind::Y;
    let left = relabel_by_class(&sup.supervisor, sup_marked)?;
    let right = tpo_as_automaton(&prune_to_aes(&t, k))?;
    deterministic_isomorphic(&left, &right)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub input: Word,
    pub output: Word,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyReport {
    pub empty: bool,
    /// Inputs replayed through the pass-through session.
    pub replayed: usize,
    /// Distinct (supervisor, estimate, erasure count) configurations reached
    /// by exhaustive enumeration.
    pub configurations: usize,
    pub violations: Vec<Violation>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.violations.is_empty()
    }
}

fn count_erasure_runs(trace: &[String]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for name in trace {
        match name.parse::<DecoratedEvent>().map(|d| d.kind) {
            Ok(DecorationKind::Erase) => {
                run += 1;
                best = best.max(run);
            }
            Ok(DecorationKind::Insert | DecorationKind::Stop) => run = 0,
            _ => {}
        }
    }
    best
}

fn in_safe_language(obsd: &Observer, word: &[String]) -> bool {
    let a = &obsd.automaton;
    word.iter().try_fold(obsd.initial(), |s, e| Some(s.and_then(|x| a.next(x, e)))).flatten().is_some()
}

/// Private safety and the erasure bound, checked two ways: every observable
/// string of the composed system up to `depth` events replayed through a
/// pass-through session, and every decision chain the supervisor permits,
/// enumerated exhaustively over the same inputs.
pub fn check_private_safety(m: &ModularEditStructure, systems: &[Automaton], depth: usize) -> Result<SafetyReport> {
    let mut report = SafetyReport { empty: m.is_empty(), ..Default::default() };
    if m.is_empty() {
        return Ok(report);
    }
    let parts: Vec<&Automaton> = systems.iter().collect();
    let g = sync_product(&parts, "G")?.automaton;
    let det = determinize(&g);
    let obsd = desired_observer(&det);
    let Some(x0) = det.initial() else { return Ok(report) };
    let dauto = &det.automaton;
    let mut events: Vec<String> = dauto.events().iter().map(|e| e.name.clone()).collect();
    events.sort();

    // pass-through replay, depth first with cloned sessions
    let session = open_session(m, Policy::PassThroughPreferred)?;
    let mut stack = vec![(session, x0)];
    while let Some((session, x)) = stack.pop() {
        report.replayed += 1;
        let trace = session.trace();
        if !in_safe_language(&obsd, &trace.emitted) {
            report.violations.push(Violation {
                input: trace.consumed.clone(),
                output: trace.emitted.clone(),
                reason: "pass-through output leaves the safe language".into(),
            });
        }
        if count_erasure_runs(&trace.trace) > m.k {
            report.violations.push(Violation {
                input: trace.consumed.clone(),
                output: trace.emitted.clone(),
                reason: format!("more than {} consecutive erasures", m.k),
            });
        }
        if trace.consumed.len() == depth {
            continue;
        }
        for e in &events {
            let Some(x2) = dauto.next(x, e) else { continue };
            let mut next = session.clone();
            match next.step(e, None) {
                Ok(_) => stack.push((next, x2)),
                Err(err) => report.violations.push(Violation {
                    input: [trace.consumed.clone(), vec![e.clone()]].concat(),
                    output: trace.emitted.clone(),
                    reason: format!("step failed: {err}"),
                }),
            }
        }
    }

    // exhaustive enumeration of supervisor-permitted decisions
    let sup = &m.supervisor;
    let all_y = |s: StateId| m.origins(s).iter().all(|&k| k == Kind::Y);
    let decorations: Vec<DecoratedEvent> = sup.events().iter().map(|e| e.name.parse()).collect::<Result<_>>()?;
    let dd = &obsd.automaton;
    type Config = (StateId, StateId, Option<StateId>, usize);
    let start: Config = (sup.initial_state().unwrap(), x0, obsd.initial(), 0);
    let mut seen: HashSet<Config> = HashSet::from([start]);
    let mut frontier: Vec<(Config, Word, Word)> = vec![(start, Word::new(), Word::new())];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for ((s, x, xd, count), input, output) in frontier {
            for e in &events {
                let Some(x2) = dauto.next(x, e) else { continue };
                let mut input2 = input.clone();
                input2.push(e.clone());
                let Some(z) = sup.next(s, e) else {
                    report.violations.push(Violation {
                        input: input2,
                        output: output.clone(),
                        reason: "supervisor disables a system event".into(),
                    });
                    continue;
                };
                // walk decision chains of this step; (state, estimate, count) local states
                let mut local_seen: HashSet<(StateId, Option<StateId>, usize)> = HashSet::new();
                let mut stack = vec![(z, xd, count, output.clone())];
                while let Some((q, qd, c, out)) = stack.pop() {
                    if !local_seen.insert((q, qd, c)) {
                        continue;
                    }
                    if all_y(q) {
                        let cfg = (q, x2, qd, c);
                        if qd.is_none() {
                            report.violations.push(Violation {
                                input: input2.clone(),
                                output: out.clone(),
                                reason: "output leaves the safe language".into(),
                            });
                        } else if seen.insert(cfg) {
                            next_frontier.push((cfg, input2.clone(), out));
                        }
                        continue;
                    }
                    for &(l, t) in sup.successors(q) {
                        let Label::Event(i) = l else { continue };
                        let d = &decorations[i];
                        let (mut qd2, mut c2, mut out2) = (qd, c, out.clone());
                        match d.kind {
                            DecorationKind::Insert => {
                                qd2 = qd.and_then(|x| dd.next(x, &d.base));
                                c2 = 0;
                                out2.push(d.base.clone());
                            }
                            DecorationKind::Stop => c2 = 0,
                            DecorationKind::Erase => c2 += 1,
                            DecorationKind::Deliver => {
                                qd2 = qd.and_then(|x| dd.next(x, &d.base));
                                out2.push(d.base.clone());
                            }
                            DecorationKind::DeliverErased | DecorationKind::System => {}
                        }
                        if c2 > m.k {
                            report.violations.push(Violation {
                                input: input2.clone(),
                                output: out2,
                                reason: format!("more than {} consecutive erasures", m.k),
                            });
                            continue;
                        }
                        stack.push((t, qd2, c2, out2));
                    }
                }
            }
        }
        frontier = next_frontier;
    }
    report.configurations = seen.len();
    Ok(report)
}

/// Outcome of one named oracle within a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub oracle: String,
    pub passed: usize,
    pub total: usize,
    /// Seeds or instances that failed.
    pub failures: Vec<String>,
}

impl OracleOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}/{}", self.oracle, self.passed, self.total)?;
        if !self.failures.is_empty() {
            write!(f, " failing: {}", self.failures.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub outcomes: Vec<OracleOutcome>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(OracleOutcome::ok)
    }
}

pub const SUITES: [&str; 7] = ["fixture", "lemmas", "abstraction", "supervisor", "safety", "inclusion", "all"];

fn tally(oracle: &str, results: impl IntoIterator<Item = (String, Result<bool>)>) -> OracleOutcome {
    let mut outcome = OracleOutcome { oracle: oracle.to_string(), passed: 0, total: 0, failures: Vec::new() };
    for (id, r) in results {
        outcome.total += 1;
        match r {
            Ok(true) => outcome.passed += 1,
            Ok(false) => outcome.failures.push(id),
            Err(e) => outcome.failures.push(format!("{id} ({e})")),
        }
    }
    outcome
}

/// Instance seeds derived from a suite seed.
fn seeds(seed: u64, n: usize) -> impl Iterator<Item = u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(move |_| rng.gen())
}

pub fn pair_spec(seed: u64) -> RandomSpec {
    RandomSpec { max_states: 8, alphabet_size: 4, ..RandomSpec::new(seed) }
}

pub fn lemma_outcomes(seed: u64, n: usize) -> Vec<OracleOutcome> {
    let pairs: Vec<(u64, (Automaton, Automaton))> =
        seeds(seed, n).map(|s| (s, random_pair(&pair_spec(s)).expect("valid spec"))).collect();
    vec![
        tally("observer-sync", pairs.iter().map(|(s, (a, b))| (s.to_string(), check_observer_sync(a, b)))),
        tally(
            "desired-observer-sync",
            pairs.iter().map(|(s, (a, b))| (s.to_string(), check_desired_observer_sync(a, b))),
        ),
    ]
}

pub fn abstraction_outcomes(seed: u64, n: usize) -> Vec<OracleOutcome> {
    let systems: Vec<(u64, Automaton)> =
        seeds(seed, n).map(|s| (s, random_system(&RandomSpec::new(s)).expect("valid spec"))).collect();
    vec![
        tally(
            "observer-abstraction",
            systems.iter().map(|(s, g)| (s.to_string(), check_abstraction_preserves_observers(g))),
        ),
        tally(
            "desired-observer-abstraction",
            systems.iter().map(|(s, g)| (s.to_string(), check_desired_observer_abstraction(g))),
        ),
        tally("tpo-abstraction", systems.iter().map(|(s, g)| (s.to_string(), check_tpo_abstraction(g)))),
    ]
}

pub fn supervisor_outcome(seed: u64, n: usize) -> OracleOutcome {
    let cases = seeds(seed, n).flat_map(|s| {
        let g = random_system(&RandomSpec::new(s)).expect("valid spec");
        (0..=2).map(move |k| (format!("{s}/k={k}"), check_supervisor_equals_aes(&g, k)))
    });
    tally("supervisor-equals-aes", cases)
}

fn component_spec(seed: u64) -> RandomSpec {
    RandomSpec { max_states: 6, alphabet_size: 3, ..RandomSpec::new(seed) }
}

/// Random two-component systems with a nonempty supervisor for `k`, drawn
/// until `n` are found (or ten times as many seeds are used up).
pub fn enforceable_pairs(seed: u64, n: usize, k: usize) -> Vec<(u64, Vec<Automaton>, ModularEditStructure)> {
    let mut out = Vec::new();
    for s in seeds(seed, 10 * n) {
        if out.len() == n {
            break;
        }
        let (a, b) = random_pair(&component_spec(s)).expect("valid spec");
        let systems = vec![a, b];
        if let Ok(m) = synthesize_modular_edit_structure(&systems, k, &SynthesisOptions::default()) {
            if !m.is_empty() {
                out.push((s, systems, m));
            }
        }
    }
    out
}

pub fn safety_outcome(seed: u64, n: usize, depth: usize) -> OracleOutcome {
    let cases = enforceable_pairs(seed, n, 1)
        .into_iter()
        .map(|(s, systems, m)| (s.to_string(), check_private_safety(&m, &systems, depth).map(|r| r.is_safe())));
    tally("private-safety", cases)
}

/// Modular inclusion on `n` random two-component systems whose components
/// all have a nonempty desired observer; a component without one cannot be
/// enforced and is rejected before any TPO is built.
pub fn inclusion_outcome(seed: u64, n: usize, depth: usize) -> OracleOutcome {
    let enforceable = |g: &Automaton| !desired_observer(&determinize(g)).is_empty();
    let cases = seeds(seed, 10 * n)
        .map(|s| (s, random_pair(&component_spec(s)).expect("valid spec")))
        .filter(|(_, (a, b))| enforceable(a) && enforceable(b))
        .take(n)
        .flat_map(|(s, (a, b))| {
            let systems = [a, b];
            [false, true].map(|abs| {
                (format!("{s}{}", if abs { "/abstracted" } else { "" }), check_modular_inclusion(&systems, depth, abs))
            })
        });
    tally("modular-inclusion", cases)
}

pub fn fixture_outcomes() -> Vec<OracleOutcome> {
    let (g1, g2) = (fixture::g1(), fixture::g2());
    let rf = fixture::system();
    let composed = sync_compose(&g1, &g2);
    let structure = synthesize_modular_edit_structure(&rf, 1, &SynthesisOptions::default());
    vec![
        tally("observer-sync", [("RF".to_string(), check_observer_sync(&g1, &g2))]),
        tally("desired-observer-sync", [("RF".to_string(), check_desired_observer_sync(&g1, &g2))]),
        tally("tpo-abstraction", rf.iter().map(|g| (g.name().to_string(), check_tpo_abstraction(g)))),
        tally(
            "supervisor-equals-aes",
            (0..=2).map(|k| (format!("RF/k={k}"), composed.clone().and_then(|g| check_supervisor_equals_aes(&g, k)))),
        ),
        tally(
            "private-safety",
            [("RF".to_string(), structure.and_then(|m| check_private_safety(&m, &rf, 8)).map(|r| r.is_safe()))],
        ),
        tally(
            "modular-inclusion",
            [false, true].map(|abs| {
                (format!("RF{}", if abs { "/abstracted" } else { "" }), check_modular_inclusion(&rf, 12, abs))
            }),
        ),
    ]
}

/// Runs a named suite. The report depends on the suite and seed only.
pub fn run_suite(suite: &str, seed: u64) -> Result<SuiteReport> {
    let outcomes = match suite {
        "fixture" => fixture_outcomes(),
        "lemmas" => lemma_outcomes(seed, 200),
        "abstraction" => abstraction_outcomes(seed, 100),
        "supervisor" => vec![supervisor_outcome(seed, 100)],
        "safety" => vec![safety_outcome(seed, 50, 6)],
        "inclusion" => vec![inclusion_outcome(seed, 50, 12)],
        "all" => {
            let mut v = fixture_outcomes();
            v.extend(lemma_outcomes(seed, 200));
            v.extend(abstraction_outcomes(seed, 100));
            v.push(supervisor_outcome(seed, 100));
            v.push(safety_outcome(seed, 50, 6));
            v.push(inclusion_outcome(seed, 50, 12));
            v
        }
        other => {
            return Err(Error::InvalidRandomSpec(format!(
                "unknown suite `{other}` (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport { suite: suite.to_string(), seed, outcomes })
}

/// Strings of `a` up to length `n` that reach only secret states, found by
/// enumerating paths directly rather than through an observer.
pub fn secret_revealing_strings(a: &Automaton, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let init: BTreeSet<StateId> = a.silent_closure(&a.initial_states().into_iter().collect());
    let mut layer: BTreeMap<Word, BTreeSet<StateId>> = BTreeMap::from([(Word::new(), init)]);
    for len in 0..=n {
        let mut next: BTreeMap<Word, BTreeSet<StateId>> = BTreeMap::new();
        for (w, states) in &layer {
            if !states.is_empty() && states.iter().all(|&s| a.state(s).secret) {
                out.insert(w.clone());
            }
            if len == n {
                continue;
            }
            for &s in states {
                for &(l, t) in a.successors(s) {
                    if let Label::Event(e) = l {
                        if a.is_silent(l) {
                            continue;
                        }
                        let mut w2 = w.clone();
                        w2.push(a.event(e).name.clone());
                        next.entry(w2).or_default().extend(a.silent_closure(&BTreeSet::from([t])));
                    }
                }
            }
        }
        layer = next;
    }
    out
}

/// Supervisor state reached from the initial state by the named events.
pub fn follow(a: &Automaton, path: &[&str]) -> Option<StateId> {
    path.iter().try_fold(a.initial_state()?, |s, e| a.next(s, e))
}

/// The monolithic largest TPO of the composed `systems`, and the TPO states
/// that supervisor states correspond to when supervisor traces are renamed
/// and replayed on it.
pub fn monolithic_images(m: &ModularEditStructure, systems: &[Automaton]) -> Result<(Tpo, BTreeSet<usize>)> {
    let t = monolithic_tpo(systems)?;
    let sup = &m.supervisor;
    let mut images = BTreeSet::new();
    let (Some(s0), Some(t0)) = (sup.initial_state(), t.initial) else { return Ok((t, images)) };
    let mut seen = HashSet::from([(s0, t0)]);
    let mut queue = VecDeque::from([(s0, t0)]);
    while let Some((s, q)) = queue.pop_front() {
        images.insert(q);
        for &(l, s2) in sup.successors(s) {
            let d: DecoratedEvent = sup.label_name(l).parse()?;
            let (class, symbol) = (d.class(), d.rename());
            let edge = t.edges[q].iter().find(|x| x.class == class && x.symbol == symbol).ok_or_else(|| {
                Error::MalformedRun(format!("`{d}` at {} has no counterpart at {}", sup.state(s).name, t.names[q]))
            })?;
            if seen.insert((s2, edge.target)) {
                queue.push_back((s2, edge.target));
            }
        }
    }
    Ok((t, images))
}
