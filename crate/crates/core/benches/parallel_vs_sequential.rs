use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphseq::engine::Engine;
use graphseq::walklab::{persistence_mc_with, EndCondition};
use graphseq::{Exec, InitialParity};

fn layer_at(depth: u32) -> graphseq::Layer {
    let mut e = Engine::new(InitialParity::Even).with_exec(Exec::Sequential);
    for _ in 0..depth {
        e.step().unwrap();
    }
    e.into_layer()
}

fn advance(c: &mut Criterion) {
    let mut group = c.benchmark_group("layer_advance");
    group.sample_size(10);
    for depth in [60u32, 120] {
        let layer = layer_at(depth);
        for exec in [Exec::Sequential, Exec::Parallel] {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), depth),
                &layer,
                |b, l| b.iter(|| l.advance(exec)),
            );
        }
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("persistence_mc");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| persistence_mc_with(1000, 20_000, EndCondition::Zero, 7, 64, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, advance, monte_carlo);
criterion_main!(benches);
