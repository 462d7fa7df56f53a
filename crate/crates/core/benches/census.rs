use std::thread;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weightcomb::census::{enumerate, EngineConfig, SearchSpec};

fn count(spec: &SearchSpec, workers: usize) -> u64 {
    let summary = enumerate(spec, &EngineConfig::new().with_workers(workers), |_| Ok(())).unwrap();
    summary.count_c2bar
}

fn sequential_vs_parallel(c: &mut Criterion) {
    let spec = SearchSpec::new(4, 120).unwrap();
    // at least two workers so the pool path runs even on one core
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).max(2);
    let mut group = c.benchmark_group("census n=4 d<=120");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| count(&spec, 1)));
    if cfg!(feature = "parallel") {
        group.bench_with_input(BenchmarkId::new("parallel", workers), &workers, |b, &w| {
            b.iter(|| count(&spec, w))
        });
    }
    group.finish();
}

criterion_group!(benches, sequential_vs_parallel);
criterion_main!(benches);
