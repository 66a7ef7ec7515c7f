use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use supcone::parallel::Execution;
use supcone::suite::{random, run_cases};
use supcone::verify::Mutation;

fn batch(c: &mut Criterion) {
    let cases = random(3, 48, &[2, 3]);
    let mut group = c.benchmark_group("random-suite-48");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(run_cases(&cases, Mutation::None, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
