use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use noneqcp::force::neq_correction;
use noneqcp::parallel::{self, Execution};
use noneqcp::{ForceOptions, Scenario};

fn z_grid(c: &mut Criterion) {
    let mut base = Scenario::gold_rubidium().with_temperatures(400.0, 295.0);
    base.options = ForceOptions::new(1e-6).unwrap();
    let zs: Vec<f64> = (0..8).map(|i| (1.0 + 0.5 * i as f64) * 1e-6).collect();
    let mut group = c.benchmark_group("neq_z_grid");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| parallel::map(&zs, exec, |&z| neq_correction(&base.with_z(z)).map(|f| f.ew)))
        });
    }
    group.finish();
}

criterion_group!(benches, z_grid);
criterion_main!(benches);
