use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ramsat_bench::{circulant_29, random_coloring};
use ramsat_core::degree::{count_degree_sequences, enum_degree_sequences};
use ramsat_core::encoder::{encode_lex_symbreak, encode_ramsey};
use ramsat_core::{canonical_key, RamseyParams};

fn canonical(c: &mut Criterion) {
    let mut g = c.benchmark_group("canonical_key");
    g.bench_function("circulant_29", |b| {
        let a = circulant_29();
        b.iter(|| canonical_key(black_box(&a)).unwrap())
    });
    for n in [8, 13, 16] {
        let a = random_coloring(n, 3, n as u64);
        g.bench_with_input(BenchmarkId::new("random", n), &a, |b, a| {
            b.iter(|| canonical_key(a).unwrap())
        });
    }
    g.finish();
}

fn encode(c: &mut Criterion) {
    let mut g = c.benchmark_group("encode");
    for spec in ["3,3,3:16", "4,3,3:30"] {
        let p: RamseyParams = spec.parse().unwrap();
        g.bench_with_input(BenchmarkId::new("ramsey_lex", spec), &p, |b, p| {
            b.iter(|| {
                let (vm, mut f) = encode_ramsey(p);
                encode_lex_symbreak(&vm, &mut f);
                f.num_clauses()
            })
        });
    }
    g.finish();
}

fn degrees(c: &mut Criterion) {
    let mut g = c.benchmark_group("degree_sequences");
    g.bench_function("enum_13_2_5", |b| {
        b.iter(|| enum_degree_sequences(13, 2, 5).len())
    });
    g.bench_function("count_13_0_12", |b| {
        b.iter(|| count_degree_sequences(13, 0, 12))
    });
    g.finish();
}

criterion_group!(benches, canonical, encode, degrees);
criterion_main!(benches);
