use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use opedit::automaton::sync_product;
use opedit::{build_largest_tpo, desired_observer, determinize, fixture, prune_to_aes};
use opedit::{synthesize_modular_edit_structure, SynthesisOptions};
use opedit_bench::random_systems;

fn synthesis(c: &mut Criterion) {
    let rf = fixture::system();
    c.bench_function("synthesize_fixture_k1", |b| {
        b.iter(|| synthesize_modular_edit_structure(black_box(&rf), 1, &SynthesisOptions::default()))
    });
    let batch = random_systems(7, 8);
    c.bench_function("synthesize_random_pairs_k1", |b| {
        b.iter(|| {
            for systems in &batch {
                let _ = synthesize_modular_edit_structure(black_box(systems), 1, &SynthesisOptions::default());
            }
        })
    });
}

fn estimation(c: &mut Criterion) {
    let g = sync_product(&[&fixture::g1(), &fixture::g2()], "G").unwrap().automaton;
    c.bench_function("determinize_monolithic", |b| b.iter(|| determinize(black_box(&g))));
    let obs = determinize(&g);
    let obsd = desired_observer(&obs);
    let t = build_largest_tpo(&obsd, &obs);
    c.bench_function("prune_monolithic_k1", |b| b.iter(|| prune_to_aes(black_box(&t), 1)));
}

criterion_group!(benches, synthesis, estimation);
criterion_main!(benches);
