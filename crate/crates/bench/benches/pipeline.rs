use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ldl_bench::paradigm_fixture;
use ldl_core::*;

fn bench_cue_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_cue_matrix");
    for n_lexemes in [5, 20] {
        let dataset = synth::agglutinative_paradigm(n_lexemes);
        group.bench_with_input(
            BenchmarkId::from_parameter(dataset.len()),
            &dataset,
            |b, ds| {
                b.iter(|| build_cue_matrix(black_box(ds), 2, Tokenization::separated("_")).unwrap())
            },
        );
    }
    group.finish();
}

fn bench_mappings(c: &mut Criterion) {
    let fixture = paradigm_fixture(10);
    let mut group = c.benchmark_group("estimate_map");
    group.sample_size(20);
    group.bench_function("comprehension", |b| {
        b.iter(|| comprehension_map(black_box(&fixture.cues), &fixture.semantics, 0.0).unwrap())
    });
    group.bench_function("production", |b| {
        b.iter(|| production_map(black_box(&fixture.semantics), &fixture.cues, 0.0).unwrap())
    });
    group.bench_function("comprehension_ridge", |b| {
        b.iter(|| comprehension_map(black_box(&fixture.cues), &fixture.semantics, 1.0).unwrap())
    });
    group.finish();
}

fn bench_evaluation(c: &mut Criterion) {
    let fixture = paradigm_fixture(10);
    let f = comprehension_map(&fixture.cues, &fixture.semantics, 0.0).unwrap();
    let s_hat = apply_map(&fixture.cues.matrix, &f).unwrap();
    let forms = fixture.dataset.forms();
    let mut group = c.benchmark_group("evaluate");
    group.sample_size(20);
    group.bench_function("comprehension", |b| {
        b.iter(|| {
            evaluate_comprehension(black_box(&s_hat), &fixture.semantics.matrix, &forms).unwrap()
        })
    });
    group.finish();
}

fn bench_decode(c: &mut Criterion) {
    let fixture = paradigm_fixture(10);
    let f = comprehension_map(&fixture.cues, &fixture.semantics, 0.0).unwrap();
    let positional = fit_positional(&fixture.semantics, &fixture.cues, 0.0).unwrap();
    let params = DecodeParams {
        threshold: 0.01,
        max_length: fixture.cues.max_sequence_len() + 1,
        beam: 10,
    };
    let mut group = c.benchmark_group("learn_paths");
    group.sample_size(10);
    group.bench_function("paradigm_590", |b| {
        b.iter(|| {
            learn_paths(
                black_box(&fixture.inventory),
                &fixture.cues,
                &fixture.semantics,
                &f,
                &positional,
                &params,
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_cue_matrix,
    bench_mappings,
    bench_evaluation,
    bench_decode
);
criterion_main!(benches);
