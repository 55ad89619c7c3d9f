//! Workloads shared by the pipeline benchmarks.

use opedit::oracle::{random_pair, RandomSpec};
use opedit::Automaton;

/// A reproducible batch of random two-component systems.
pub fn random_systems(seed: u64, count: usize) -> Vec<Vec<Automaton>> {
    (0..count as u64)
        .map(|i| {
            let (a, b) = random_pair(&RandomSpec::new(seed.wrapping_add(i))).expect("default spec is valid");
            vec![a, b]
        })
        .collect()
}
