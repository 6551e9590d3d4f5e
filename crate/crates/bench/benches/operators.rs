use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use whap_bench::{default_grid, example_factorization, minus_apw, test_signal};
use whap_core::operator::{apply_whh, finite_section_matrix, ExtensionMode, MultiplierSpec, ReflexiveInverse};

fn operators(c: &mut Criterion) {
    let grid = default_grid();
    let g = test_signal(&grid);
    let m = MultiplierSpec::Apw(minus_apw()).prepare(&grid).unwrap();
    c.bench_function("apply WH+H", |b| b.iter(|| apply_whh(&m, black_box(&g)).unwrap()));

    let af = example_factorization();
    c.bench_function("prepare reflexive inverse", |b| {
        b.iter(|| ReflexiveInverse::new(&af, &grid).unwrap())
    });
    let inverse = ReflexiveInverse::new(&af, &grid).unwrap();
    c.bench_function("apply reflexive inverse", |b| {
        b.iter(|| inverse.apply(black_box(&g), ExtensionMode::Zero).unwrap())
    });

    let mut group = c.benchmark_group("finite section");
    group.sample_size(10);
    group.bench_function("n = 256", |b| b.iter(|| finite_section_matrix(&m, 256).unwrap()));
    group.finish();
}

criterion_group!(benches, operators);
criterion_main!(benches);
