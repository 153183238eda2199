use criterion::{black_box, criterion_group, criterion_main, Criterion};

use delp_core::corpus;
use delp_core::dialectics::{explore, DialecticsConfig, Strategy};
use delp_core::model::ground_program;
use delp_core::oracle::{differential_run, GeneratorParams, OracleConfig};
use delp_core::parser::{parse_program, parse_query};

fn bench_parse_and_ground(c: &mut Criterion) {
    let entry = corpus::entry("stocks");
    c.bench_function("parse_ground_stocks", |b| {
        b.iter(|| {
            let p = parse_program(black_box(entry.text), entry.mode).unwrap();
            ground_program(&p).unwrap()
        })
    });
}

fn bench_warrant_search(c: &mut Criterion) {
    let g = corpus::ground("three_lines");
    let cfg = DialecticsConfig::default();
    let query = parse_query("a").unwrap();
    c.bench_function("three_lines_a_exhaustive", |b| {
        b.iter(|| explore(&g, &cfg, black_box(&query), Strategy::Exhaustive).unwrap())
    });
    c.bench_function("three_lines_a_pruned", |b| {
        b.iter(|| explore(&g, &cfg, black_box(&query), Strategy::Pruned).unwrap())
    });
}

fn bench_warranted_set(c: &mut Criterion) {
    let g = corpus::ground("stocks");
    let cfg = DialecticsConfig::default();
    c.bench_function("stocks_warranted_literals", |b| {
        b.iter(|| delp_core::dialectics::warranted_literals(black_box(&g), &cfg).unwrap())
    });
}

fn bench_differential(c: &mut Criterion) {
    let params = GeneratorParams::default();
    let programs: Vec<_> = (0..8).map(|i| delp_core::oracle::random_program(&params, i)).collect();
    let cfg = DialecticsConfig::default();
    let ocfg = OracleConfig::default();
    c.bench_function("differential_8_random_programs", |b| {
        b.iter(|| {
            for g in &programs {
                black_box(differential_run(g, &cfg, &ocfg));
            }
        })
    });
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_parse_and_ground, bench_warrant_search, bench_warranted_set, bench_differential
);
criterion_main!(benches);
