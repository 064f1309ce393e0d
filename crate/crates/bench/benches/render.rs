use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use fmol_bench::{busy_patch, busy_score};
use fmol_core::{make_engine, render_score};

fn blocks(c: &mut Criterion) {
    let mut engine = make_engine(busy_patch(), 44100).unwrap();
    let mut group = c.benchmark_group("engine");
    group.throughput(Throughput::Elements(engine.block_size() as u64));
    group.bench_function("render_block_24_units", |b| b.iter(|| black_box(engine.render_block().left[0])));
    group.finish();
}

fn minute(c: &mut Criterion) {
    let score = busy_score(60_000);
    let mut group = c.benchmark_group("score");
    group.sample_size(10).measurement_time(Duration::from_secs(30));
    group.bench_function("render_60s_24_units", |b| b.iter(|| black_box(render_score(&score).unwrap())));
    group.finish();
}

criterion_group!(benches, blocks, minute);
criterion_main!(benches);
